#include "olp/harness.hpp"
#include "olp/error.hpp"
#include "olp/grammar.hpp"
#include "olp/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

// Random-draw order per round, fixed for reproducibility:
//   1. task replacement: one double when omega > 0 and the round is not a
//      schedule boundary, plus one integer draw when it fires;
//   2. per role (finder, locator, checker, organizer):
//      a. epsilon-greedy selection: one double, plus one integer on explore;
//      b. stochastic-mode outcome draws, ascending action index over the
//         LLMs executed this round;
//      c. per judged execution, one double per board member, members in id
//         order.

namespace olp::harness {

using backends::Completion;
using backends::SimProfile;
using grammar::RoleRequest;
using model::ExperimentConfig;
using model::TaskSpec;
using rlcore::Outcome;
using rlcore::QState;

namespace {

struct Execution {
    std::string llm;
    std::string text;
    Completion completion;
    double v = 0;
    double reward = 0;
    Outcome outcome = Outcome::Failure;
};

struct RoleRuntime {
    RoleId role;
    rlcore::QTable table;
    rlcore::RoleStats stats;
    std::optional<QState> history;
    std::map<std::string, double> cached_v; // last judged accuracy score per llm
    std::string last_executed;              // judging fires again on an LLM change
};

class Engine {
public:
    Engine(const ExperimentConfig& config, const SimProfile& sim,
           const std::map<std::string, TaskSpec>& tasks, Variant variant, bool baseline)
        : config_(config), sim_(sim), tasks_(tasks), variant_(variant), baseline_(baseline),
          profiles_(config.profiles.empty() ? backends::ProfileSet()
                                            : backends::ProfileSet(config.profiles)),
          rng_(config.seed) {
        params_ = {config.k1, config.k2, config.v_correct, config.v_wrong};
        validate_setup();
        board_.weights[config.board_member] = 1.0;
        board_.frozen_until = config.freeze_rounds;
        board_.delta_w = config.delta_w;
        for (const auto& [id, task] : tasks_) task_ids_.push_back(id);

        for (RoleId role : kLlmRoles) {
            RoleRuntime rt;
            rt.role = role;
            rt.table = rlcore::QTable(role_name(role),
                                      baseline_ ? std::vector<std::string>{config.baseline_llm}
                                                : config.llm_pool);
            runtimes_.push_back(std::move(rt));
        }
    }

    RunResult run() {
        RunResult out;
        std::map<std::string, std::string> prev_occupant;

        for (int round = 0; round < config_.rounds; ++round) {
            resolve_task(round);

            for (auto& rt : runtimes_) {
                RoleRound rr = baseline_ ? baseline_round(rt, round) : learner_round(rt, round);
                const auto role = role_name(rt.role);
                auto it = prev_occupant.find(role);
                if (it != prev_occupant.end() && it->second != rr.occupant)
                    ++out.summary.switches[role];
                out.summary.switches.try_emplace(role, 0);
                prev_occupant[role] = rr.occupant;
                out.summary.total_reward += rr.reward;
                out.role_rounds.push_back(std::move(rr));
            }

            out.board_history.push_back({round, board_.weights});

            if (!baseline_) {
                step_board(round);
                apply_pool_schedule(round);
            }
        }

        out.summary.rounds = config_.rounds;
        out.summary.total_cost = total_cost_;
        out.summary.scoreboard = scoreboard_;
        out.summary.final_board = board_.weights;
        for (auto& rt : runtimes_) {
            out.tables.emplace(role_name(rt.role), rt.table);
            out.stats.emplace(role_name(rt.role), rt.stats);
        }
        // records were accumulated via learner_round / baseline_round
        out.history = std::move(history_);
        return out;
    }

private:
    void validate_setup() {
        if (config_.task_schedule.empty())
            throw config_error("task_schedule must not be empty");
        for (const auto& e : config_.task_schedule)
            if (!tasks_.count(e.task))
                throw config_error("task_schedule references unknown task " + e.task);
        for (const auto& p : config_.pool_schedule)
            profiles_.get(p.llm);
        for (const auto& id : config_.llm_pool)
            profiles_.get(id);
        if (!baseline_ && config_.board_member.empty())
            throw config_error("board_member is required");
        if (config_.baseline_llm.empty())
            throw config_error("baseline_llm is required");
        profiles_.get(config_.baseline_llm);
        if (!baseline_) profiles_.get(config_.board_member);
    }

    double per_call_cost(const std::string& id) const {
        return profiles_.per_call_cost(id, config_.tokens_in, config_.tokens_out);
    }

    std::vector<double> cost_vector(const rlcore::QTable& table) const {
        std::vector<double> costs;
        costs.reserve(table.action_count());
        for (const auto& id : table.actions()) costs.push_back(per_call_cost(id));
        return costs;
    }

    std::string scheduled_task(int round) const {
        const model::TaskScheduleEntry* chosen = nullptr;
        for (const auto& e : config_.task_schedule) {
            if (e.from <= round && round <= e.to) return e.task;
            if (e.from <= round) chosen = &e;
        }
        return chosen ? chosen->task : config_.task_schedule.front().task;
    }

    void resolve_task(int round) {
        const std::string scheduled = scheduled_task(round);
        const bool boundary = round == 0 || scheduled != scheduled_task(round - 1);
        if (boundary) {
            current_task_ = scheduled;
            return;
        }
        if (config_.omega > 0.0 && rng_.next_double() < config_.omega)
            current_task_ = task_ids_[rng_.next_below(task_ids_.size())];
    }

    const TaskSpec& task() const { return tasks_.at(current_task_); }

    // Task-level role request: the whole transcript as one window, gold
    // titles and sketches as role inputs.
    const RoleRequest& task_request(RoleId role) {
        auto key = current_task_ + "/" + role_name(role);
        auto it = request_cache_.find(key);
        if (it != request_cache_.end()) return it->second;

        const TaskSpec& t = task();
        RoleRequest req;
        req.chunk.passages = t.transcript;
        req.chunk.carried_from_previous = 0;
        req.aspect_schema = t.gold.aspect_schema;
        for (const auto& topic : t.gold.topics) {
            req.titles.push_back(topic.title);
            req.topics.push_back({topic.title, topic.span});
        }
        return request_cache_.emplace(key, std::move(req)).first->second;
    }

    Execution execute(RoleId role, const std::string& llm, int round, double outcome_u) {
        const auto& req = task_request(role);
        backends::Invocation inv;
        inv.role = role;
        inv.llm = llm;
        inv.request = req;
        inv.prompt = grammar::render_prompt(role, req);

        Execution ex;
        ex.llm = llm;
        ex.completion = backends::sim_invoke(inv, task(), sim_, profiles_.get(llm),
                                             config_.tokens_in, config_.tokens_out, outcome_u);
        ex.text = ex.completion.text;
        ex.v = judge(role, llm, ex.text, round);
        ex.reward = rlcore::compute_reward(ex.v, ex.completion.cost, ex.completion.latency_s,
                                           params_);
        ex.outcome = rlcore::classify_outcome(ex.reward);
        return ex;
    }

    double judge(RoleId role, const std::string& llm, const std::string& output, int round) {
        auto& rt = runtime(role);
        const bool due = config_.judge_every_n <= 1 || round % config_.judge_every_n == 0 ||
                         !rt.cached_v.count(llm) || llm != rt.last_executed;
        rt.last_executed = llm;
        if (!due) return rt.cached_v.at(llm);

        std::vector<board::Judgment> judgments;
        for (const auto& member : board_.members()) {
            const double u = rng_.next_double();
            judgments.push_back(backends::sim_judge(role, output, task(), task_request(role),
                                                    member, sim_, params_, u));
        }
        const auto agg = board::aggregate_judgments(judgments, board_);
        rt.cached_v[llm] = agg.v;
        return agg.v;
    }

    RoleRuntime& runtime(RoleId role) {
        for (auto& rt : runtimes_)
            if (rt.role == role) return rt;
        throw config_error("no runtime for role");
    }

    void bill(const Execution& ex, bool billed) {
        if (billed) total_cost_ += ex.completion.cost;
    }

    void tally(RoleId role, const Execution& ex) {
        auto& cell = scoreboard_[role_name(role)][current_task_][ex.llm];
        ++cell.attempts;
        if (ex.outcome == Outcome::Success) ++cell.successes;
    }

    void record(int round, RoleId role, const Execution& ex,
                const std::optional<QState>& state_before,
                const std::optional<std::string>& partner) {
        RoundRecord r;
        r.round = round;
        r.role = role;
        r.task = current_task_;
        r.state_before = state_before;
        r.action = ex.llm;
        r.partner = partner;
        r.reward = ex.reward;
        r.outcome = ex.outcome;
        r.cost = ex.completion.cost;
        r.board_weights = board_.weights;
        history_.push_back(std::move(r));
    }

    // one double per executed llm in ascending action order (stochastic only)
    std::map<std::string, double> outcome_draws(const std::vector<std::string>& llms) {
        std::map<std::string, double> draws;
        if (sim_.mode != SimProfile::Mode::Stochastic) {
            for (const auto& id : llms) draws[id] = 0.0;
            return draws;
        }
        std::vector<std::string> sorted = llms;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& id : sorted) draws[id] = rng_.next_double();
        return draws;
    }

    RoleRound learner_round(RoleRuntime& rt, int round) {
        RoleRound rr;
        rr.round = round;
        rr.role = rt.role;
        rr.task = current_task_;
        const auto costs = cost_vector(rt.table);

        // round 0: greedy bootstrap unless ablated away
        if (!rt.history.has_value() && variant_ != Variant::NoGreedy) {
            auto draws = outcome_draws(rt.table.actions());

            std::vector<Execution> runs;
            auto boot = rlcore::greedy_bootstrap(
                rt.table,
                [&](std::size_t idx) {
                    const auto& llm = rt.table.actions()[idx];
                    Execution ex = execute(rt.role, llm, round, draws.at(llm));
                    rt.stats.record(llm, ex.outcome);
                    tally(rt.role, ex);
                    bill(ex, true);
                    record(round, rt.role, ex, std::nullopt, std::nullopt);
                    runs.push_back(std::move(ex));
                    return rlcore::ExecResult{runs.back().reward, runs.back().text};
                },
                config_.alpha, config_.gamma, costs);

            rt.history = boot.next_state;
            rr.occupant = rt.table.actions()[boot.chosen];
            rr.selected = rr.occupant;
            rr.greedy = rr.occupant;
            rr.reward = runs[boot.chosen].reward;
            rr.outcome = runs[boot.chosen].outcome;
            return rr;
        }

        // no history and no bootstrap: pure tie-break selection, single run
        if (!rt.history.has_value()) {
            const std::vector<double> zero_row(rt.table.action_count(), 0.0);
            const std::size_t sel = rlcore::argmax_action(zero_row, costs);
            const auto& llm = rt.table.actions()[sel];
            auto draws = outcome_draws({llm});
            Execution ex = execute(rt.role, llm, round, draws.at(llm));
            rt.stats.record(llm, ex.outcome);
            tally(rt.role, ex);
            bill(ex, true);
            record(round, rt.role, ex, std::nullopt, std::nullopt);
            rt.history = QState{llm, ex.outcome};
            rr.occupant = llm;
            rr.selected = llm;
            rr.greedy = llm;
            rr.reward = ex.reward;
            rr.outcome = ex.outcome;
            return rr;
        }

        const QState state = *rt.history;
        rr.greedy = rt.table.actions()[rlcore::argmax_action(rt.table.row(state), costs)];
        bool explored = false;
        const std::size_t sel =
            rlcore::select_action(rt.table, state, config_.epsilon, rng_, costs, &explored);
        const std::string& selected = rt.table.actions()[sel];
        rr.selected = selected;
        rr.explored = explored;

        if (selected == state.llm) {
            auto draws = outcome_draws({selected});
            Execution ex = execute(rt.role, selected, round, draws.at(selected));
            rt.stats.record(selected, ex.outcome);
            tally(rt.role, ex);
            bill(ex, true);
            rlcore::q_update(rt.table, state, sel, ex.reward, config_.alpha, config_.gamma);
            record(round, rt.role, ex, state, std::nullopt);
            rt.history = QState{selected, ex.outcome};
            rr.occupant = selected;
            rr.reward = ex.reward;
            rr.outcome = ex.outcome;
            return rr;
        }

        if (variant_ == Variant::NoCross) {
            auto draws = outcome_draws({selected});
            Execution ex = execute(rt.role, selected, round, draws.at(selected));
            rt.stats.record(selected, ex.outcome);
            tally(rt.role, ex);
            bill(ex, true);
            rlcore::q_update(rt.table, state, sel, ex.reward, config_.alpha, config_.gamma);
            record(round, rt.role, ex, state, std::nullopt);
            rt.history = QState{selected, ex.outcome};
            rr.occupant = selected;
            rr.reward = ex.reward;
            rr.outcome = ex.outcome;
            return rr;
        }

        // cross-update: both the incumbent and the newcomer run
        const std::size_t prev_idx = rt.table.action_index(state.llm);
        auto draws = outcome_draws({state.llm, selected});
        Execution ex_i = execute(rt.role, state.llm, round, draws.at(state.llm));
        Execution ex_j = execute(rt.role, selected, round, draws.at(selected));
        rt.stats.record(state.llm, ex_i.outcome);
        rt.stats.record(selected, ex_j.outcome);
        tally(rt.role, ex_i);
        tally(rt.role, ex_j);

        auto cross = rlcore::cross_update(rt.table, state, prev_idx, sel, ex_i.reward,
                                          ex_j.reward, config_.alpha, config_.gamma, costs);
        const Execution& returned = cross.chosen == prev_idx ? ex_i : ex_j;
        bill(ex_i, config_.bill_partner || cross.chosen == prev_idx);
        bill(ex_j, config_.bill_partner || cross.chosen == sel);
        record(round, rt.role, ex_i, state, selected);
        record(round, rt.role, ex_j, state, state.llm);

        rt.history = cross.next_state;
        rr.occupant = returned.llm;
        rr.reward = returned.reward;
        rr.outcome = returned.outcome;
        return rr;
    }

    RoleRound baseline_round(RoleRuntime& rt, int round) {
        const auto& llm = config_.baseline_llm;
        auto draws = outcome_draws({llm});
        Execution ex = execute(rt.role, llm, round, draws.at(llm));
        rt.stats.record(llm, ex.outcome);
        tally(rt.role, ex);
        bill(ex, true);
        record(round, rt.role, ex, rt.history, std::nullopt);
        rt.history = QState{llm, ex.outcome};

        RoleRound rr;
        rr.round = round;
        rr.role = rt.role;
        rr.task = current_task_;
        rr.occupant = llm;
        rr.selected = llm;
        rr.reward = ex.reward;
        rr.outcome = ex.outcome;
        return rr;
    }

    void step_board(int round) {
        std::vector<board::ChainResult> chains;
        for (auto& rt : runtimes_) {
            const auto costs = cost_vector(rt.table);
            const auto walk = board::chain_table(rt.table, costs, config_.k1);
            std::size_t cheapest = 0;
            for (std::size_t i = 1; i < costs.size(); ++i)
                if (costs[i] < costs[cheapest]) cheapest = i;
            chains.push_back(board::extract_chain(walk, rt.table.actions()[cheapest]));
        }
        const auto elected = board::elect_members(
            chains, config_.election_mode == model::ElectionMode::Maximal);
        board_ = board::step_weights(board_, elected, round);
    }

    void apply_pool_schedule(int round) {
        for (const auto& entry : config_.pool_schedule) {
            if (entry.round != round) continue;
            for (auto& rt : runtimes_) {
                if (rt.table.has_action(entry.llm)) continue;
                auto result = rlcore::update_pool(
                    rt.table, rt.stats, entry.llm,
                    config_.pool_mode == model::PoolMode::Replace
                        ? rlcore::PoolUpdateMode::Replace
                        : rlcore::PoolUpdateMode::Expand,
                    [&](const std::string& id) { return per_call_cost(id); });
                if (result.removed) {
                    rt.cached_v.erase(*result.removed);
                    if (rt.history && rt.history->llm == *result.removed)
                        rt.history->llm = entry.llm; // newcomer inherits the slot
                }
            }
        }
    }

    const ExperimentConfig& config_;
    const SimProfile& sim_;
    const std::map<std::string, TaskSpec>& tasks_;
    Variant variant_;
    bool baseline_;
    backends::ProfileSet profiles_;
    Rng rng_;
    rlcore::RewardParams params_;
    board::BoardState board_;
    std::vector<RoleRuntime> runtimes_;
    std::vector<std::string> task_ids_;
    std::string current_task_;
    std::map<std::string, RoleRequest> request_cache_;
    std::vector<RoundRecord> history_;
    Scoreboard scoreboard_;
    double total_cost_ = 0;
};

} // namespace

RunResult run_experiment(const ExperimentConfig& config, const SimProfile& sim,
                         const std::map<std::string, TaskSpec>& tasks, Variant variant) {
    Engine engine(config, sim, tasks, variant, false);
    return engine.run();
}

RunResult run_baseline_strongest(const ExperimentConfig& config, const SimProfile& sim,
                                 const std::map<std::string, TaskSpec>& tasks) {
    Engine engine(config, sim, tasks, Variant::Full, true);
    return engine.run();
}

RunResult run_ablation(Variant variant, const ExperimentConfig& config,
                       const SimProfile& sim,
                       const std::map<std::string, TaskSpec>& tasks) {
    return run_experiment(config, sim, tasks, variant);
}

std::map<std::string, TaskSpec> load_tasks(const ExperimentConfig& config) {
    std::map<std::string, TaskSpec> tasks;
    for (const auto& [id, path] : config.tasks) {
        auto task = model::load_task(path);
        task.id = id; // the config key names the task within the experiment
        tasks.emplace(id, std::move(task));
    }
    return tasks;
}

// --- emission --------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

static std::string render_weights(const std::map<std::string, double>& weights) {
    std::string out;
    for (const auto& [id, w] : weights) {
        if (!out.empty()) out += ';';
        out += id + ":" + format_double(w);
    }
    return out;
}

std::string history_csv(const RunResult& run) {
    std::string out =
        "round,role,task,state_llm,state_outcome,action,partner,reward,outcome,cost,board_weights\n";
    for (const auto& r : run.history) {
        out += std::to_string(r.round) + ',' + role_name(r.role) + ',' + r.task + ',';
        out += (r.state_before ? r.state_before->llm : std::string("-")) + ',';
        out += (r.state_before ? outcome_name(r.state_before->outcome) : "-") + std::string(",");
        out += r.action + ',' + (r.partner ? *r.partner : std::string("-")) + ',';
        out += format_double(r.reward) + ',' + outcome_name(r.outcome) + ',';
        out += format_double(r.cost) + ',' + render_weights(r.board_weights) + '\n';
    }
    return out;
}

std::string board_csv(const RunResult& run) {
    std::string out = "round,members,weights\n";
    for (const auto& [round, weights] : run.board_history) {
        std::string members, values;
        for (const auto& [id, w] : weights) {
            if (!members.empty()) {
                members += ';';
                values += ';';
            }
            members += id;
            values += format_double(w);
        }
        out += std::to_string(round) + ',' + members + ',' + values + '\n';
    }
    return out;
}

std::string qtables_json(const RunResult& run) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [role, table] : run.tables)
        arr.push_back(nlohmann::ordered_json::parse(table.to_json()));
    return arr.dump(2) + "\n";
}

std::string summary_json(const RunResult& run, const RunResult& baseline,
                         const std::string& baseline_llm, const std::string& variant_name) {
    nlohmann::ordered_json j;
    j["variant"] = variant_name;
    j["rounds"] = run.summary.rounds;
    j["total_cost"] = run.summary.total_cost;
    j["total_reward"] = run.summary.total_reward;
    j["baseline"] = {{"llm", baseline_llm},
                     {"total_cost", baseline.summary.total_cost},
                     {"total_reward", baseline.summary.total_reward}};
    const double bc = baseline.summary.total_cost;
    const double br = baseline.summary.total_reward;
    j["cost_saving_pct"] = bc > 0 ? 1.0 - run.summary.total_cost / bc : 0.0;
    j["reward_delta_pct"] = br != 0 ? (run.summary.total_reward - br) / std::abs(br) : 0.0;
    j["switches"] = run.summary.switches;
    nlohmann::ordered_json sb = nlohmann::ordered_json::object();
    for (const auto& [role, by_task] : run.summary.scoreboard) {
        for (const auto& [task, by_llm] : by_task)
            for (const auto& [llm, cell] : by_llm)
                sb[role][task][llm] = {{"attempts", cell.attempts}, {"successes", cell.successes}};
    }
    j["scoreboard"] = std::move(sb);
    j["final_board"] = run.summary.final_board;
    return j.dump(2) + "\n";
}

// --- synthetic tasks ----------------------------------------------------------------

static const char* kWordBank[] = {
    "anchor",  "bottle",  "candle",  "drone",   "easel",   "fabric",  "garnet",  "hammock",
    "ivory",   "jacket",  "kettle",  "lantern", "marble",  "nectar",  "orchid",  "pebble",
    "quartz",  "ribbon",  "saddle",  "timber",  "umbrella","velvet",  "walnut",  "yarn",
    "zephyr",  "basket",  "copper",  "dahlia",  "ember",   "falcon",  "ginger",  "harbor",
    "island",  "juniper", "kiosk",   "lagoon",  "meadow",  "nutmeg",  "opal",    "prairie",
    "quiver",  "russet",  "sequoia", "tundra",  "upland",  "vertex",  "willow",  "yonder",
    "almond",  "breeze",  "cinder",  "dapple",  "ferry",   "grove",   "hazel",   "inlet",
    "jasper",  "knoll",   "linden",  "mosaic",  "nimbus",  "orchard", "pinion",  "quince",
};
constexpr std::size_t kBankSize = sizeof(kWordBank) / sizeof(kWordBank[0]);

model::TaskSpec make_synth_task(std::uint64_t seed, const SynthOptions& options) {
    if (options.topics < 0 || static_cast<std::size_t>(options.topics) * 2 > kBankSize)
        throw config_error("make_synth_task: topic count out of range");

    Rng rng = Rng::derive(seed, 0x5A17);
    model::TaskSpec task;
    task.id = options.id;
    task.topic_count = options.topics;
    task.gold.aspect_schema =
        options.aspect_schema.empty() ? model::aspect_preset("live-commerce") : options.aspect_schema;
    const auto& schema = task.gold.aspect_schema;

    // distinct word pairs keep cross-topic title similarity below threshold
    std::vector<std::size_t> order(kBankSize);
    for (std::size_t i = 0; i < kBankSize; ++i) order[i] = i;
    for (std::size_t i = kBankSize - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_below(i + 1)]);

    std::int64_t next_index = options.start_index;
    double total_chars = 0;
    for (int k = 0; k < options.topics; ++k) {
        const std::string w1 = kWordBank[order[2 * k]];
        const std::string w2 = kWordBank[order[2 * k + 1]];
        model::TopicRecord topic;
        topic.title = w1 + " " + w2 + " " + std::to_string(k);

        const int passages = 2 + static_cast<int>(rng.next_below(5)); // 2..6
        const std::size_t target =
            std::max<std::size_t>(20, static_cast<std::size_t>(options.chars_per_topic /
                                                               std::max(passages, 1)));
        std::vector<model::Passage> topic_passages;
        for (int p = 0; p < passages; ++p) {
            model::Passage passage;
            passage.index = next_index++;
            passage.text = w1 + " " + w2;
            while (passage.text.size() < target) {
                passage.text += ' ';
                passage.text += kWordBank[rng.next_below(kBankSize)];
            }
            total_chars += static_cast<double>(passage.text.size());
            topic_passages.push_back(std::move(passage));
        }
        topic.span = {topic_passages.front().index, topic_passages.back().index};

        for (const auto& name : schema) topic.aspects.push_back({name, {}});
        auto put = [&](std::size_t aspect, const model::Passage& p) {
            topic.aspects[aspect % schema.size()].entries.push_back({p.index, p.text});
        };
        put(0, topic_passages.front());
        if (passages > 1) put(schema.size() - 1, topic_passages.back());
        // a middle passage lands in each interior aspect when there is one
        for (int p = 1; p + 1 < passages; ++p)
            put(1 + static_cast<std::size_t>((p - 1) % std::max<std::size_t>(schema.size() - 2, 1)),
                topic_passages[p]);

        for (auto& p : topic_passages) task.transcript.push_back(std::move(p));
        task.gold.topics.push_back(std::move(topic));
    }
    task.chars_per_topic = options.topics > 0 ? total_chars / options.topics : 0;
    return task;
}

} // namespace olp::harness
