#include "olp/rlcore.hpp"
#include "olp/error.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

namespace olp::rlcore {

QTable::QTable(std::string role, std::vector<std::string> actions)
    : role_(std::move(role)), actions_(std::move(actions)) {
    values_.assign(actions_.size() * 2, std::vector<double>(actions_.size(), 0.0));
}

std::size_t QTable::action_index(const std::string& id) const {
    for (std::size_t i = 0; i < actions_.size(); ++i)
        if (actions_[i] == id) return i;
    throw config_error("QTable[" + role_ + "]: unknown action " + id);
}

bool QTable::has_action(const std::string& id) const {
    return std::find(actions_.begin(), actions_.end(), id) != actions_.end();
}

std::size_t QTable::row_index(const QState& state) const {
    const std::size_t a = action_index(state.llm);
    return a * 2 + (state.outcome == Outcome::Failure ? 1 : 0);
}

double QTable::value(const QState& state, std::size_t action) const {
    return values_[row_index(state)][action];
}

void QTable::set_value(const QState& state, std::size_t action, double v) {
    values_[row_index(state)][action] = v;
}

const std::vector<double>& QTable::row(const QState& state) const {
    return values_[row_index(state)];
}

bool QTable::row_all_zero(const QState& state) const {
    for (double v : values_[row_index(state)])
        if (v != 0.0) return false;
    return true;
}

void QTable::replace_action(std::size_t idx, const std::string& new_id) {
    actions_[idx] = new_id;
    for (auto& row : values_) row[idx] = 0.0;
    std::fill(values_[idx * 2].begin(), values_[idx * 2].end(), 0.0);
    std::fill(values_[idx * 2 + 1].begin(), values_[idx * 2 + 1].end(), 0.0);
}

void QTable::append_action(const std::string& new_id) {
    actions_.push_back(new_id);
    for (auto& row : values_) row.push_back(0.0);
    values_.emplace_back(actions_.size(), 0.0);
    values_.emplace_back(actions_.size(), 0.0);
}

std::string QTable::to_json() const {
    nlohmann::ordered_json j;
    j["role"] = role_;
    j["actions"] = actions_;
    j["values"] = values_;
    return j.dump(2);
}

QTable QTable::from_json(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw data_error("QTable: not valid JSON");
    QTable t(j.at("role").get<std::string>(), j.at("actions").get<std::vector<std::string>>());
    auto values = j.at("values").get<std::vector<std::vector<double>>>();
    if (values.size() != t.actions_.size() * 2)
        throw data_error("QTable: expected " + std::to_string(t.actions_.size() * 2) + " rows");
    for (const auto& row : values)
        if (row.size() != t.actions_.size())
            throw data_error("QTable: row width does not match action count");
    t.values_ = std::move(values);
    return t;
}

double compute_reward(double v, double cost, double delay, const RewardParams& params) {
    return v - params.k1 * cost - params.k2 * delay;
}

Outcome classify_outcome(double reward) {
    return reward > 0.0 ? Outcome::Success : Outcome::Failure;
}

std::size_t argmax_action(const std::vector<double>& row, const std::vector<double>& per_call_costs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i] > row[best]) {
            best = i;
        } else if (row[i] == row[best] && per_call_costs[i] < per_call_costs[best]) {
            best = i;
        }
    }
    return best;
}

std::size_t select_action(const QTable& table, const QState& state, double epsilon,
                          Rng& rng, const std::vector<double>& per_call_costs,
                          bool* explored) {
    const std::size_t n = table.action_count();
    if (n == 0) throw config_error("select_action: empty action set for role " + table.role());
    if (per_call_costs.size() != n)
        throw config_error("select_action: cost vector size mismatch");

    const double u = rng.next_double();
    if (explored) *explored = u < epsilon;
    if (u < epsilon)
        return static_cast<std::size_t>(rng.next_below(n));
    return argmax_action(table.row(state), per_call_costs);
}

void q_update(QTable& table, const QState& state, std::size_t action, double reward,
              double alpha, double gamma) {
    double target = reward;
    if (gamma > 0.0) {
        const QState successor{table.actions()[action], classify_outcome(reward)};
        const auto& row = table.row(successor);
        target += gamma * *std::max_element(row.begin(), row.end());
    }
    const double q = table.value(state, action);
    table.set_value(state, action, (1.0 - alpha) * q + alpha * target);
}

BootstrapResult greedy_bootstrap(QTable& table,
                                 const std::function<ExecResult(std::size_t)>& run,
                                 double alpha, double gamma,
                                 const std::vector<double>& per_call_costs) {
    const std::size_t n = table.action_count();
    if (n == 0) throw config_error("greedy_bootstrap: empty pool");

    BootstrapResult result;
    result.runs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        result.runs.push_back(run(i));

    // Every LLM serves as the previous LLM in turn; every LLM's reward
    // updates that state. n observed states x n actions = half the table.
    for (std::size_t i = 0; i < n; ++i) {
        const QState prev{table.actions()[i], classify_outcome(result.runs[i].reward)};
        for (std::size_t j = 0; j < n; ++j)
            q_update(table, prev, j, result.runs[j].reward, alpha, gamma);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (result.runs[i].reward > result.runs[best].reward ||
            (result.runs[i].reward == result.runs[best].reward &&
             per_call_costs[i] < per_call_costs[best]))
            best = i;
    }
    result.chosen = best;
    result.answer = result.runs[best].answer;
    result.next_state = {table.actions()[best], classify_outcome(result.runs[best].reward)};
    return result;
}

CrossResult cross_update(QTable& table, const QState& prev_state,
                         std::size_t i, std::size_t j, double reward_i, double reward_j,
                         double alpha, double gamma,
                         const std::vector<double>& per_call_costs) {
    if (i == j)
        throw config_error("cross_update: current LLM equals previous LLM; use q_update");

    const QState state_i{table.actions()[i], classify_outcome(reward_i)};
    const QState state_j{table.actions()[j], classify_outcome(reward_j)};

    q_update(table, prev_state, i, reward_i, alpha, gamma);
    q_update(table, prev_state, j, reward_j, alpha, gamma);
    q_update(table, state_i, j, reward_j, alpha, gamma);
    q_update(table, state_j, i, reward_i, alpha, gamma);

    CrossResult r;
    if (reward_j > reward_i ||
        (reward_j == reward_i && per_call_costs[j] < per_call_costs[i]))
        r.chosen = j;
    else
        r.chosen = i;
    r.next_state = r.chosen == i ? state_i : state_j;
    return r;
}

PoolUpdateResult update_pool(QTable& table, RoleStats& stats, const std::string& new_llm,
                             PoolUpdateMode mode,
                             const std::function<double(const std::string&)>& per_call_cost) {
    if (table.has_action(new_llm))
        throw config_error("update_pool: " + new_llm + " already in the pool for role " + table.role());

    PoolUpdateResult result;
    if (mode == PoolUpdateMode::Expand) {
        table.append_action(new_llm);
        stats.by_llm[new_llm] = {};
        return result;
    }

    // lowest success rate goes; ties remove the more expensive
    std::size_t victim = 0;
    double victim_rate = std::numeric_limits<double>::infinity();
    double victim_cost = -1;
    for (std::size_t i = 0; i < table.action_count(); ++i) {
        const auto& id = table.actions()[i];
        const auto it = stats.by_llm.find(id);
        const double rate = it == stats.by_llm.end() ? 0.0 : it->second.rate();
        const double cost = per_call_cost(id);
        if (rate < victim_rate || (rate == victim_rate && cost > victim_cost)) {
            victim = i;
            victim_rate = rate;
            victim_cost = cost;
        }
    }
    result.removed = table.actions()[victim];
    stats.by_llm.erase(*result.removed);
    stats.by_llm[new_llm] = {};
    table.replace_action(victim, new_llm);
    return result;
}

} // namespace olp::rlcore
