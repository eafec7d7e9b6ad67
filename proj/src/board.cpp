#include "olp/board.hpp"
#include "olp/error.hpp"

#include <algorithm>
#include <cmath>

namespace olp::board {

std::vector<std::string> BoardState::members() const {
    std::vector<std::string> out;
    for (const auto& [id, w] : weights)
        if (w > 0.0) out.push_back(id);
    return out;
}

rlcore::QTable representative_table(const std::vector<const rlcore::QTable*>& role_tables,
                                    const std::vector<double>& per_call_costs, double k1) {
    if (role_tables.empty()) throw config_error("representative_table: no tables");
    const auto& first = *role_tables.front();
    for (const auto* t : role_tables)
        if (t->actions() != first.actions())
            throw config_error("representative_table: action sets are not aligned");

    rlcore::QTable rep("representative", first.actions());
    const std::size_t n = first.action_count();
    for (std::size_t r = 0; r < 2 * n; ++r)
        for (std::size_t a = 0; a < n; ++a) {
            double sum = 0;
            for (const auto* t : role_tables) sum += t->values()[r][a];
            rep.values()[r][a] = sum + static_cast<double>(role_tables.size()) * k1 * per_call_costs[a];
        }
    return rep;
}

rlcore::QTable chain_table(const rlcore::QTable& raw,
                           const std::vector<double>& per_call_costs, double k1) {
    rlcore::QTable out(raw.role(), raw.actions());
    const std::size_t n = raw.action_count();
    for (std::size_t r = 0; r < 2 * n; ++r) {
        bool all_zero = true;
        for (std::size_t a = 0; a < n; ++a)
            if (raw.values()[r][a] != 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero) continue;
        for (std::size_t a = 0; a < n; ++a)
            out.values()[r][a] = raw.values()[r][a] + k1 * per_call_costs[a];
    }
    return out;
}

ChainResult extract_chain(const rlcore::QTable& table, const std::string& start) {
    ChainResult chain;
    chain.role = table.role();
    std::set<std::string> visited;
    std::string node = start;

    for (;;) {
        chain.nodes.push_back(node);
        visited.insert(node);

        const rlcore::QState fail_state{node, rlcore::Outcome::Failure};
        if (table.row_all_zero(fail_state)) {
            chain.terminal = node; // no observed failures: node is enough
            return chain;
        }
        const auto& row = table.row(fail_state);
        const std::size_t next = static_cast<std::size_t>(
            std::max_element(row.begin(), row.end()) - row.begin());
        const std::string& next_id = table.actions()[next];
        if (next_id == node) {
            chain.terminal = node;
            return chain;
        }
        if (visited.count(next_id)) {
            chain.nodes.push_back(next_id);
            chain.terminal = std::nullopt; // loop
            return chain;
        }
        node = next_id;
    }
}

std::optional<std::set<std::string>> elect_members(const std::vector<ChainResult>& chains,
                                                   bool maximal_only) {
    std::set<std::string> elected;
    for (const auto& c : chains)
        if (!c.is_loop()) elected.insert(*c.terminal);
    if (elected.empty()) return std::nullopt;

    if (maximal_only) {
        // prune terminals that some other chain walks through and past
        std::set<std::string> dominated;
        for (const auto& c : chains) {
            if (c.is_loop()) continue;
            for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
                dominated.insert(c.nodes[i]);
        }
        std::set<std::string> pruned;
        for (const auto& id : elected)
            if (!dominated.count(id)) pruned.insert(id);
        if (!pruned.empty()) elected = std::move(pruned);
    }
    return elected;
}

BoardState step_weights(const BoardState& board,
                        const std::optional<std::set<std::string>>& elected, int round) {
    if (round < board.frozen_until || !elected.has_value() || elected->empty())
        return board;

    BoardState next = board;
    const double target_w = 1.0 / static_cast<double>(elected->size());

    // every id that is either a member or elected participates in the move
    std::set<std::string> ids;
    for (const auto& [id, w] : board.weights) ids.insert(id);
    for (const auto& id : *elected) ids.insert(id);

    next.weights.clear();
    double sum = 0;
    for (const auto& id : ids) {
        const double w = board.weights.count(id) ? board.weights.at(id) : 0.0;
        const double target = elected->count(id) ? target_w : 0.0;
        const double step = std::clamp(target - w, -board.delta_w, board.delta_w);
        // assign the target exactly once it is within reach
        const double moved = std::abs(target - w) <= board.delta_w ? target : w + step;
        if (moved > 0.0) {
            next.weights[id] = moved;
            sum += moved;
        }
    }
    if (sum <= 0.0) return board; // degenerate; keep previous board
    if (sum != 1.0)
        for (auto& [id, w] : next.weights) w /= sum;
    return next;
}

AggregateResult aggregate_judgments(const std::vector<Judgment>& judgments,
                                    const BoardState& board) {
    if (board.members().empty())
        throw config_error("aggregate_judgments: the advisory board is empty");

    AggregateResult out;
    double best_weight = -1;
    for (const auto& j : judgments) {
        auto it = board.weights.find(j.member);
        if (it == board.weights.end() || it->second <= 0.0)
            throw config_error("aggregate_judgments: " + j.member +
                               " has zero weight and may not judge");
        out.v += it->second * j.v;
        if (j.revised_output && it->second > best_weight) {
            best_weight = it->second;
            out.revision = j.revised_output;
        }
    }
    return out;
}

} // namespace olp::board
