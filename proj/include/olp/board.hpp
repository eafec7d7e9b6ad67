#pragma once

#include "olp/rlcore.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace olp::board {

// Advisory-board voting weights. Weights sum to 1; a member whose weight
// reaches 0 is dropped and never invoked as a judge again.
struct BoardState {
    std::map<std::string, double> weights;
    int frozen_until = 100; // rounds [0, frozen_until) leave weights untouched
    double delta_w = 0.01;

    bool is_member(const std::string& id) const {
        auto it = weights.find(id);
        return it != weights.end() && it->second > 0.0;
    }
    std::vector<std::string> members() const;
};

struct Judgment {
    std::string member;
    double v = 0;
    std::optional<std::string> revised_output; // present iff v < v_correct
};

// Walk of failure-state argmax transitions through a Q-table.
struct ChainResult {
    std::string role;
    std::vector<std::string> nodes;
    std::optional<std::string> terminal; // nullopt == loop
    bool is_loop() const { return !terminal.has_value(); }
};

// Sum of the per-role tables with the per-call cost added back, removing the
// price term from rewards so the values rank raw ability. All tables must
// share one action set.
rlcore::QTable representative_table(const std::vector<const rlcore::QTable*>& role_tables,
                                    const std::vector<double>& per_call_costs, double k1);

// Per-role chain-walking table: cost-adjusted like the representative table,
// except rows never updated in the raw table stay all-zero so the walk can
// recognize them.
rlcore::QTable chain_table(const rlcore::QTable& raw,
                           const std::vector<double>& per_call_costs, double k1);

// From node x, follow argmax over the (x, Failure) row. An all-zero row or a
// self-argmax terminates the chain at x; revisiting a node records a loop.
ChainResult extract_chain(const rlcore::QTable& table, const std::string& start);

// Union of the non-loop chain terminals. Nullopt when every chain looped
// (vacuous election, board retained). Maximal mode additionally prunes
// terminals that appear mid-chain elsewhere.
std::optional<std::set<std::string>> elect_members(const std::vector<ChainResult>& chains,
                                                   bool maximal_only = false);

// Move weights toward the uniform distribution over the elected set, at most
// delta_w per member per round, then renormalize. No-op while frozen or when
// the election was vacuous.
BoardState step_weights(const BoardState& board,
                        const std::optional<std::set<std::string>>& elected, int round);

struct AggregateResult {
    double v = 0;
    std::optional<std::string> revision; // from the highest-weight reviser
};

// Weighted sum of member scores. Every judgment must come from a member with
// positive weight.
AggregateResult aggregate_judgments(const std::vector<Judgment>& judgments,
                                    const BoardState& board);

} // namespace olp::board
