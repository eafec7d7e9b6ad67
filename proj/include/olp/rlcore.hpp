#pragma once

#include "olp/rng.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace olp::rlcore {

enum class Outcome { Success, Failure };

inline const char* outcome_name(Outcome o) {
    return o == Outcome::Success ? "success" : "failure";
}

// State = the LLM used in the previous round together with whether it
// succeeded. Rows of the Q-table are (llm, outcome) pairs, columns are the
// LLMs available to the role.
struct QState {
    std::string llm;
    Outcome outcome = Outcome::Success;

    bool operator==(const QState&) const = default;
};

struct RewardParams {
    double k1 = 1.0;   // cost coefficient
    double k2 = 0.1;   // delay coefficient
    double v_correct = 10.0;
    double v_wrong = -100.0;
};

class QTable {
public:
    QTable() = default;
    QTable(std::string role, std::vector<std::string> actions);

    const std::string& role() const { return role_; }
    const std::vector<std::string>& actions() const { return actions_; }
    std::size_t action_count() const { return actions_.size(); }

    std::size_t action_index(const std::string& id) const; // throws if absent
    bool has_action(const std::string& id) const;

    std::size_t row_index(const QState& state) const;
    double value(const QState& state, std::size_t action) const;
    void set_value(const QState& state, std::size_t action, double v);

    const std::vector<double>& row(const QState& state) const;
    const std::vector<std::vector<double>>& values() const { return values_; }
    std::vector<std::vector<double>>& values() { return values_; }
    bool row_all_zero(const QState& state) const;

    // slot surgery used by pool updates
    void replace_action(std::size_t idx, const std::string& new_id);
    void append_action(const std::string& new_id);

    std::string to_json() const;
    static QTable from_json(const std::string& text);

private:
    std::string role_;
    std::vector<std::string> actions_;
    std::vector<std::vector<double>> values_; // 2n rows, n columns
};

// Cumulative per-LLM execution tally for one role.
struct RoleStats {
    struct Entry {
        std::int64_t attempts = 0;
        std::int64_t successes = 0;
        double rate() const { return attempts == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(attempts); }
    };
    std::map<std::string, Entry> by_llm;

    void record(const std::string& llm, Outcome outcome) {
        auto& e = by_llm[llm];
        ++e.attempts;
        if (outcome == Outcome::Success) ++e.successes;
    }
};

// R = v - k1*c - k2*t
double compute_reward(double v, double cost, double delay, const RewardParams& params);

// Positive reward is success; zero and below is failure.
Outcome classify_outcome(double reward);

// Epsilon-greedy over the state's row. Greedy ties break toward the lowest
// per-call cost, then action-list order. Exploration consumes one double
// draw, plus one integer draw when it fires; *explored reports which path ran.
std::size_t select_action(const QTable& table, const QState& state, double epsilon,
                          Rng& rng, const std::vector<double>& per_call_costs,
                          bool* explored = nullptr);

// Greedy argmax without exploration (the tie-break rule above).
std::size_t argmax_action(const std::vector<double>& row, const std::vector<double>& per_call_costs);

// One-cell update. With gamma=0 this is Q <- (1-a)Q + aR; with gamma>0 the
// target adds gamma * max over the successor row implied by the reward's
// outcome.
void q_update(QTable& table, const QState& state, std::size_t action, double reward,
              double alpha, double gamma);

struct ExecResult {
    double reward = 0;
    std::string answer; // serialized role output, opaque to rlcore
};

struct BootstrapResult {
    std::size_t chosen = 0;
    std::string answer;
    QState next_state;
    std::vector<ExecResult> runs; // one per action, in action order
};

// Round-0 cold-start: every LLM takes the role once; for every observed
// previous-state S_i and every action j the cell (S_i, j) is updated with
// R_j, filling exactly n^2 of the 2n^2 cells. The best answer is returned
// and its state becomes the role history.
BootstrapResult greedy_bootstrap(QTable& table,
                                 const std::function<ExecResult(std::size_t)>& run,
                                 double alpha, double gamma,
                                 const std::vector<double>& per_call_costs);

struct CrossResult {
    std::size_t chosen = 0;
    QState next_state;
};

// Both the previous LLM i and the newly selected LLM j ran this round; four
// cells are updated, in order: (S_prev,i)<-R_i, (S_prev,j)<-R_j,
// (S_i',j)<-R_j, (S_j',i)<-R_i, where S_x' pairs x with the outcome of R_x.
// The better answer is returned, so switching is never worse than staying.
CrossResult cross_update(QTable& table, const QState& prev_state,
                         std::size_t i, std::size_t j, double reward_i, double reward_j,
                         double alpha, double gamma,
                         const std::vector<double>& per_call_costs);

enum class PoolUpdateMode { Replace, Expand };

struct PoolUpdateResult {
    std::optional<std::string> removed; // set in replace mode
};

// Admit a new LLM to the role. Replace mode removes the LLM with the lowest
// cumulative success rate (never-attempted counts as 0; ties remove the more
// expensive one) and hands its zeroed slot to the newcomer. Expand mode
// appends a fresh zeroed action.
PoolUpdateResult update_pool(QTable& table, RoleStats& stats, const std::string& new_llm,
                             PoolUpdateMode mode,
                             const std::function<double(const std::string&)>& per_call_cost);

} // namespace olp::rlcore
