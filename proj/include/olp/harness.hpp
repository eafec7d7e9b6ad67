#pragma once

#include "olp/backends.hpp"
#include "olp/board.hpp"
#include "olp/metrics.hpp"
#include "olp/model.hpp"
#include "olp/rlcore.hpp"
#include "olp/roles.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace olp::harness {

// One executed (role, LLM) pair. Cross-update rounds produce two of these,
// the greedy bootstrap one per pool member.
struct RoundRecord {
    int round = 0;
    RoleId role = RoleId::TopicFinder;
    std::string task;
    std::optional<rlcore::QState> state_before; // absent during bootstrap
    std::string action;
    std::optional<std::string> partner;
    double reward = 0;
    rlcore::Outcome outcome = rlcore::Outcome::Success;
    double cost = 0;
    std::map<std::string, double> board_weights;
};

// Round-level resolution per role: whose answer was returned downstream.
struct RoleRound {
    int round = 0;
    RoleId role = RoleId::TopicFinder;
    std::string task;
    std::string occupant;      // LLM whose answer was returned
    double reward = 0;         // that answer's reward
    rlcore::Outcome outcome = rlcore::Outcome::Success;
    std::string selected;      // epsilon-greedy selection this round
    std::string greedy;        // argmax of the state row, exploration aside
    bool explored = false;     // selection came from the exploration draw
};

struct ScoreCell {
    std::int64_t attempts = 0;
    std::int64_t successes = 0;
};

// (role, task, llm) -> tally of executions
using Scoreboard = std::map<std::string, std::map<std::string, std::map<std::string, ScoreCell>>>;

struct Summary {
    int rounds = 0;
    double total_cost = 0;    // every billed execution
    double total_reward = 0;  // sum of returned rewards per (round, role)
    std::map<std::string, int> switches; // per role: occupant changes
    Scoreboard scoreboard;
    std::map<std::string, double> final_board;
};

struct RunResult {
    std::vector<RoundRecord> history;
    std::vector<RoleRound> role_rounds;
    std::vector<std::pair<int, std::map<std::string, double>>> board_history;
    std::map<std::string, rlcore::QTable> tables; // by role name
    std::map<std::string, rlcore::RoleStats> stats;
    Summary summary;
};

enum class Variant { Full, NoGreedy, NoCross };

// The reinforcement-learning round loop: task resolution, action selection
// (bootstrap / cross / plain), simulated execution, board judging, Q and
// stats updates, board election, pool schedule. Fully deterministic given
// config.seed.
RunResult run_experiment(const model::ExperimentConfig& config,
                         const backends::SimProfile& sim,
                         const std::map<std::string, model::TaskSpec>& tasks,
                         Variant variant = Variant::Full);

// Every role served by the configured strongest LLM in every round; same
// ledger format, no learning.
RunResult run_baseline_strongest(const model::ExperimentConfig& config,
                                 const backends::SimProfile& sim,
                                 const std::map<std::string, model::TaskSpec>& tasks);

// Ablations: NoGreedy skips the round-0 bootstrap, NoCross replaces the
// dual-execution update with a single q_update on the chosen LLM.
RunResult run_ablation(Variant variant, const model::ExperimentConfig& config,
                       const backends::SimProfile& sim,
                       const std::map<std::string, model::TaskSpec>& tasks);

// Loads every task referenced by the config.
std::map<std::string, model::TaskSpec> load_tasks(const model::ExperimentConfig& config);

// --- emission -----------------------------------------------------------------

// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double v);

std::string history_csv(const RunResult& run);
std::string board_csv(const RunResult& run);
std::string qtables_json(const RunResult& run);

// Summary plus the baseline comparison (cost saving and reward delta).
std::string summary_json(const RunResult& run, const RunResult& baseline,
                         const std::string& baseline_llm, const std::string& variant_name);

// --- synthetic tasks ------------------------------------------------------------

struct SynthOptions {
    std::string id = "synth";
    int topics = 4;
    double chars_per_topic = 400;
    std::vector<std::string> aspect_schema; // empty -> live-commerce preset
    std::int64_t start_index = 0;
};

// Deterministic synthetic task with gold topics/aspects, used by the
// reference fixtures and the pipeline property tests.
model::TaskSpec make_synth_task(std::uint64_t seed, const SynthOptions& options);

} // namespace olp::harness
