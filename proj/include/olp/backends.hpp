#pragma once

#include "olp/board.hpp"
#include "olp/grammar.hpp"
#include "olp/model.hpp"
#include "olp/rlcore.hpp"
#include "olp/rng.hpp"
#include "olp/roles.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace olp::backends {

struct Invocation {
    RoleId role = RoleId::TopicFinder;
    std::string llm;
    std::string prompt;
    grammar::RoleRequest request; // structured mirror of the prompt
};

struct Completion {
    std::string text;
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
    double latency_s = 0;
    double cost = 0;
};

// Linear per-token pricing from the profile's $/1M rates.
double compute_cost(const model::LlmProfile& profile, std::int64_t tokens_in,
                    std::int64_t tokens_out);

// The seven models of the reference experiment with their public prices.
std::vector<model::LlmProfile> default_profiles();

class ProfileSet {
public:
    ProfileSet() : profiles_(default_profiles()) {}
    explicit ProfileSet(std::vector<model::LlmProfile> profiles);

    const model::LlmProfile& get(const std::string& id) const; // throws on unknown id
    bool has(const std::string& id) const;
    double per_call_cost(const std::string& id, std::int64_t tokens_in,
                         std::int64_t tokens_out) const;
    const std::vector<model::LlmProfile>& all() const { return profiles_; }

private:
    std::vector<model::LlmProfile> profiles_;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual Completion invoke(const Invocation& inv) = 0;
};

// --- gold-derived role responses ---------------------------------------------

// What a perfectly competent model would answer for this request.
std::string gold_response(RoleId role, const model::TaskSpec& task,
                          const grammar::RoleRequest& request);

// Deterministic wrong answer: one dropped topic, spans shifted by +2, a
// spurious merge, or one passage filed under the wrong aspect.
std::string perturbed_response(RoleId role, const model::TaskSpec& task,
                               const grammar::RoleRequest& request);

// [0,1] quality of an output against the gold response: exactness for the
// finder and checker, mean span IoU for the locator, worst-topic aspect
// recall for the organizer. Unparseable output scores 0.
double score_role_output(RoleId role, const std::string& output,
                         const model::TaskSpec& task, const grammar::RoleRequest& request);

// --- simulated backend --------------------------------------------------------

struct SimProfile {
    enum class Mode { Threshold, Stochastic };

    Mode mode = Mode::Threshold;
    double temperature = 0.02;                                   // stochastic only
    std::map<std::string, std::map<std::string, double>> capability; // llm -> role -> [0,1]
    std::map<std::string, std::map<std::string, double>> difficulty; // task -> role -> [0,1]
    std::map<std::string, double> judge_accuracy;                    // llm -> [0,1]

    double capability_of(const std::string& llm, RoleId role) const;
    double difficulty_of(const std::string& task, RoleId role) const;
    // u is the pre-drawn uniform variate (ignored in threshold mode)
    bool succeeds(const std::string& llm, RoleId role, const std::string& task, double u) const;

    static SimProfile load(const std::string& path);
    static SimProfile parse(const std::string& json_text);
    std::string to_json() const;
};

// Deterministic simulated invocation: gold response on success, the role's
// perturbation on failure. Latency is pinned at 1 s for every model.
Completion sim_invoke(const Invocation& inv, const model::TaskSpec& task,
                      const SimProfile& sim, const model::LlmProfile& profile,
                      std::int64_t tokens_in, std::int64_t tokens_out, double u);

class SimBackend : public Backend {
public:
    SimBackend(model::TaskSpec task, SimProfile sim, ProfileSet profiles,
               std::int64_t tokens_in, std::int64_t tokens_out, std::uint64_t seed)
        : task_(std::move(task)), sim_(std::move(sim)), profiles_(std::move(profiles)),
          tokens_in_(tokens_in), tokens_out_(tokens_out), rng_(Rng::derive(seed, 0xBACCE7)) {}

    Completion invoke(const Invocation& inv) override;

private:
    model::TaskSpec task_;
    SimProfile sim_;
    ProfileSet profiles_;
    std::int64_t tokens_in_;
    std::int64_t tokens_out_;
    Rng rng_;
};

// --- oracle backend -----------------------------------------------------------

// Always answers with the gold response, free and instant.
Completion oracle_invoke(const Invocation& inv, const model::TaskSpec& task);

class OracleBackend : public Backend {
public:
    explicit OracleBackend(model::TaskSpec task) : task_(std::move(task)) {}
    Completion invoke(const Invocation& inv) override { return oracle_invoke(inv, task_); }

private:
    model::TaskSpec task_;
};

// --- generic HTTP chat-completion client ---------------------------------------

struct HttpEndpoint {
    std::string base_url;  // e.g. http://localhost:8080
    std::string path = "/v1/chat/completions";
    std::string model;     // provider-side model name
    std::string key_env;   // env var holding the API key
    int timeout_s = 60;
    bool fixed_tokens = false; // bill the fixed counts below instead of reported usage
    std::int64_t tokens_in = 25000;
    std::int64_t tokens_out = 25000;
};

// Posts {model, messages:[{role:"user", content: prompt}]} and reads back
// choices[0].message.content plus token usage. Missing credentials throw a
// credentials error; transport and malformed-body problems throw io/data
// errors the pipeline maps to role failures.
Completion http_invoke(const Invocation& inv, const HttpEndpoint& endpoint,
                       const model::LlmProfile& profile);

class HttpBackend : public Backend {
public:
    HttpBackend(std::map<std::string, HttpEndpoint> endpoints, ProfileSet profiles)
        : endpoints_(std::move(endpoints)), profiles_(std::move(profiles)) {}

    Completion invoke(const Invocation& inv) override;

private:
    std::map<std::string, HttpEndpoint> endpoints_;
    ProfileSet profiles_;
};

// --- simulated judging ----------------------------------------------------------

// With probability judge_accuracy the member scores honestly (revising to
// gold when imperfect); otherwise it marks the answer wrong and "revises" it
// to the very same text.
board::Judgment sim_judge(RoleId role, const std::string& output,
                          const model::TaskSpec& task, const grammar::RoleRequest& request,
                          const std::string& member, const SimProfile& sim,
                          const rlcore::RewardParams& params, double u);

} // namespace olp::backends
