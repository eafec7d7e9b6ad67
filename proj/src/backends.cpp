#include "olp/backends.hpp"
#include "olp/error.hpp"
#include "olp/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace olp::backends {

using ordered_json = nlohmann::ordered_json;

double compute_cost(const model::LlmProfile& profile, std::int64_t tokens_in,
                    std::int64_t tokens_out) {
    if (tokens_in < 0 || tokens_out < 0)
        throw config_error("compute_cost: negative token count");
    return static_cast<double>(tokens_in) / 1e6 * profile.input_price +
           static_cast<double>(tokens_out) / 1e6 * profile.output_price;
}

std::vector<model::LlmProfile> default_profiles() {
    return {
        {"llama3-8b", "Llama3-8b", 0.08, 0.08},
        {"gpt-4o-mini", "GPT-4o-mini", 0.15, 0.6},
        {"mixtral-8x7b", "Mixtral-8x7b", 0.7, 0.7},
        {"command-r", "Command-r", 0.5, 1.5},
        {"gpt-4o", "GPT-4o", 5.0, 15.0},
        {"gemini-1.5-pro", "Gemini-1.5-Pro", 7.0, 21.0},
        {"claude-3-opus", "Claude-3-Opus", 15.0, 75.0},
    };
}

ProfileSet::ProfileSet(std::vector<model::LlmProfile> profiles)
    : profiles_(std::move(profiles)) {
    if (profiles_.empty()) profiles_ = default_profiles();
}

const model::LlmProfile& ProfileSet::get(const std::string& id) const {
    for (const auto& p : profiles_)
        if (p.id == id) return p;
    throw config_error("unknown LLM profile: " + id);
}

bool ProfileSet::has(const std::string& id) const {
    for (const auto& p : profiles_)
        if (p.id == id) return true;
    return false;
}

double ProfileSet::per_call_cost(const std::string& id, std::int64_t tokens_in,
                                 std::int64_t tokens_out) const {
    return compute_cost(get(id), tokens_in, tokens_out);
}

// --- gold responses -----------------------------------------------------------

static model::Span clip(const model::Span& s, std::int64_t lo, std::int64_t hi) {
    return {std::max(s.first, lo), std::min(s.last, hi)};
}

static const model::TopicRecord* gold_topic_by_title(const model::TaskSpec& task,
                                                     const std::string& title) {
    for (const auto& t : task.gold.topics)
        if (t.title == title) return &t;
    return nullptr;
}

static std::vector<const model::TopicRecord*> gold_topics_in_chunk(
    const model::TaskSpec& task, const model::Chunk& chunk) {
    std::vector<const model::TopicRecord*> out;
    if (chunk.empty()) return out;
    for (const auto& t : task.gold.topics)
        if (t.span.last >= chunk.first_index() && t.span.first <= chunk.last_index())
            out.push_back(&t);
    return out;
}

static model::StructuredDocument gold_fragment(const model::TaskSpec& task,
                                               const grammar::RoleRequest& request) {
    model::StructuredDocument doc;
    doc.aspect_schema = request.aspect_schema;
    for (const auto& sketch : request.topics) {
        model::TopicRecord topic;
        topic.title = sketch.title;
        topic.span = sketch.span;
        const auto* gold = gold_topic_by_title(task, sketch.title);
        for (const auto& name : doc.aspect_schema) {
            model::AspectList aspect;
            aspect.name = name;
            if (gold) {
                if (const auto* g = gold->find_aspect(name))
                    for (const auto& e : g->entries)
                        if (sketch.span.contains(e.index)) aspect.entries.push_back(e);
            }
            topic.aspects.push_back(std::move(aspect));
        }
        doc.topics.push_back(std::move(topic));
    }
    return doc;
}

std::string gold_response(RoleId role, const model::TaskSpec& task,
                          const grammar::RoleRequest& request) {
    switch (role) {
    case RoleId::TopicFinder: {
        std::vector<std::string> titles;
        for (const auto* t : gold_topics_in_chunk(task, request.chunk))
            titles.push_back(t->title);
        return grammar::serialize_titles(titles);
    }
    case RoleId::TopicLocator: {
        std::vector<grammar::TopicSketch> out;
        const std::int64_t lo = request.chunk.empty() ? 0 : request.chunk.first_index();
        const std::int64_t hi = request.chunk.empty() ? 0 : request.chunk.last_index();
        for (const auto& title : request.titles) {
            const auto* gold = gold_topic_by_title(task, title);
            grammar::TopicSketch s;
            s.title = title;
            s.span = gold ? clip(gold->span, lo, hi) : model::Span{lo, hi};
            out.push_back(std::move(s));
        }
        return grammar::serialize_spans(out);
    }
    case RoleId::RelationshipChecker:
        return ""; // located topics are already right: no merges, no deletions
    case RoleId::ContentOrganizer:
        return model::serialize_document(gold_fragment(task, request));
    default:
        throw config_error("gold_response: " + role_name(role) + " is not model-backed");
    }
}

std::string perturbed_response(RoleId role, const model::TaskSpec& task,
                               const grammar::RoleRequest& request) {
    switch (role) {
    case RoleId::TopicFinder: {
        std::vector<std::string> titles;
        for (const auto* t : gold_topics_in_chunk(task, request.chunk))
            titles.push_back(t->title);
        if (!titles.empty()) titles.erase(titles.begin()); // one topic lost
        return grammar::serialize_titles(titles);
    }
    case RoleId::TopicLocator: {
        auto sketches = grammar::parse_spans(gold_response(role, task, request));
        for (auto& s : sketches) {
            s.span.first += 2;
            s.span.last += 2;
        }
        return grammar::serialize_spans(sketches);
    }
    case RoleId::RelationshipChecker: {
        std::vector<grammar::Decision> decisions;
        if (request.topics.size() >= 2)
            decisions.push_back({grammar::Decision::Merge, 0, 1});
        else if (!request.topics.empty())
            decisions.push_back({grammar::Decision::Delete, 0, 0});
        return grammar::serialize_decisions(decisions);
    }
    case RoleId::ContentOrganizer: {
        auto doc = gold_fragment(task, request);
        // misfile the first available passage under the next aspect
        for (auto& topic : doc.topics) {
            for (std::size_t a = 0; a < topic.aspects.size(); ++a) {
                if (topic.aspects[a].entries.empty()) continue;
                auto entry = topic.aspects[a].entries.front();
                topic.aspects[a].entries.erase(topic.aspects[a].entries.begin());
                topic.aspects[(a + 1) % topic.aspects.size()].entries.push_back(entry);
                return model::serialize_document(doc);
            }
        }
        return model::serialize_document(doc);
    }
    default:
        throw config_error("perturbed_response: " + role_name(role) + " is not model-backed");
    }
}

double score_role_output(RoleId role, const std::string& output,
                         const model::TaskSpec& task, const grammar::RoleRequest& request) {
    const std::string gold = gold_response(role, task, request);
    if (output == gold) return 1.0;

    switch (role) {
    case RoleId::TopicFinder:
    case RoleId::RelationshipChecker:
        return 0.0; // judged right-or-wrong only
    case RoleId::TopicLocator: {
        std::vector<grammar::TopicSketch> pred;
        try {
            pred = grammar::parse_spans(output);
        } catch (const Error&) {
            return 0.0;
        }
        const auto want = grammar::parse_spans(gold);
        if (want.empty()) return 0.0;
        double total = 0;
        for (const auto& g : want) {
            for (const auto& p : pred)
                if (p.title == g.title) {
                    total += metrics::iou(p.span, g.span);
                    break;
                }
        }
        return total / static_cast<double>(want.size());
    }
    case RoleId::ContentOrganizer: {
        model::StructuredDocument pred;
        try {
            pred = model::parse_document(output);
        } catch (const Error&) {
            return 0.0;
        }
        const auto want = model::parse_document(gold);
        if (want.topics.empty()) return 0.0;
        // an organizer is only as good as its worst topic
        double worst = 1.0;
        for (const auto& g : want.topics) {
            double best = 0.0;
            for (const auto& p : pred.topics)
                if (p.title == g.title) {
                    best = metrics::topic_recall(p, g);
                    break;
                }
            worst = std::min(worst, best);
        }
        return worst;
    }
    default:
        throw config_error("score_role_output: " + role_name(role) + " is not model-backed");
    }
}

// --- simulated backend -----------------------------------------------------------

static double level_lookup(const std::map<std::string, std::map<std::string, double>>& table,
                           const std::string& outer, RoleId role, const char* what) {
    auto it = table.find(outer);
    if (it == table.end())
        throw config_error(std::string("sim profile: no ") + what + " entry for " + outer);
    auto jt = it->second.find(role_name(role));
    if (jt == it->second.end())
        throw config_error(std::string("sim profile: no ") + what + " entry for " + outer +
                           "/" + role_name(role));
    return jt->second;
}

double SimProfile::capability_of(const std::string& llm, RoleId role) const {
    return level_lookup(capability, llm, role, "capability");
}

double SimProfile::difficulty_of(const std::string& task, RoleId role) const {
    return level_lookup(difficulty, task, role, "difficulty");
}

bool SimProfile::succeeds(const std::string& llm, RoleId role, const std::string& task,
                          double u) const {
    const double cap = capability_of(llm, role);
    const double diff = difficulty_of(task, role);
    if (mode == Mode::Threshold) return cap >= diff;
    const double p = 1.0 / (1.0 + std::exp(-(cap - diff) / temperature));
    return u < p;
}

SimProfile SimProfile::parse(const std::string& json_text) {
    auto j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw config_error("sim profile: not valid JSON");
    SimProfile sim;
    const auto mode = j.value("mode", std::string("threshold"));
    if (mode == "threshold") sim.mode = Mode::Threshold;
    else if (mode == "stochastic") sim.mode = Mode::Stochastic;
    else throw config_error("sim profile: mode must be \"threshold\" or \"stochastic\"");
    sim.temperature = j.value("temperature", 0.02);
    if (sim.temperature <= 0) throw config_error("sim profile: temperature must be positive");

    auto load_levels = [](const ordered_json& src,
                          std::map<std::string, std::map<std::string, double>>& dst,
                          const char* what) {
        for (auto it = src.begin(); it != src.end(); ++it)
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
                const double v = jt.value().get<double>();
                if (v < 0.0 || v > 1.0)
                    throw config_error(std::string("sim profile: ") + what + " level out of [0,1]");
                dst[it.key()][jt.key()] = v;
            }
    };
    load_levels(j.at("capability"), sim.capability, "capability");
    load_levels(j.at("difficulty"), sim.difficulty, "difficulty");
    if (j.contains("judge_accuracy"))
        for (auto it = j.at("judge_accuracy").begin(); it != j.at("judge_accuracy").end(); ++it) {
            const double v = it.value().get<double>();
            if (v < 0.0 || v > 1.0) throw config_error("sim profile: judge_accuracy out of [0,1]");
            sim.judge_accuracy[it.key()] = v;
        }
    return sim;
}

SimProfile SimProfile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open sim profile: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text);
}

std::string SimProfile::to_json() const {
    ordered_json j;
    j["mode"] = mode == Mode::Threshold ? "threshold" : "stochastic";
    j["temperature"] = temperature;
    j["capability"] = capability;
    j["difficulty"] = difficulty;
    j["judge_accuracy"] = judge_accuracy;
    return j.dump(2) + "\n";
}

Completion sim_invoke(const Invocation& inv, const model::TaskSpec& task,
                      const SimProfile& sim, const model::LlmProfile& profile,
                      std::int64_t tokens_in, std::int64_t tokens_out, double u) {
    if (inv.prompt.empty()) throw config_error("sim_invoke: empty prompt");
    Completion c;
    c.text = sim.succeeds(inv.llm, inv.role, task.id, u)
                 ? gold_response(inv.role, task, inv.request)
                 : perturbed_response(inv.role, task, inv.request);
    c.tokens_in = tokens_in;
    c.tokens_out = tokens_out;
    c.latency_s = 1.0;
    c.cost = compute_cost(profile, tokens_in, tokens_out);
    return c;
}

Completion SimBackend::invoke(const Invocation& inv) {
    const double u = sim_.mode == SimProfile::Mode::Stochastic ? rng_.next_double() : 0.0;
    return sim_invoke(inv, task_, sim_, profiles_.get(inv.llm), tokens_in_, tokens_out_, u);
}

Completion oracle_invoke(const Invocation& inv, const model::TaskSpec& task) {
    Completion c;
    c.text = gold_response(inv.role, task, inv.request);
    return c;
}

// --- HTTP client ---------------------------------------------------------------

board::Judgment sim_judge(RoleId role, const std::string& output,
                          const model::TaskSpec& task, const grammar::RoleRequest& request,
                          const std::string& member, const SimProfile& sim,
                          const rlcore::RewardParams& params, double u) {
    auto it = sim.judge_accuracy.find(member);
    if (it == sim.judge_accuracy.end())
        throw config_error("sim profile: no judge_accuracy entry for " + member);

    board::Judgment j;
    j.member = member;
    if (u < it->second) {
        const double score = score_role_output(role, output, task, request);
        j.v = metrics::map_score_to_v(score, params.v_correct, params.v_wrong);
        if (score < 1.0) j.revised_output = gold_response(role, task, request);
    } else {
        // the observed judging pathology: wrong verdict, "revision" identical
        j.v = params.v_wrong;
        j.revised_output = output;
    }
    return j;
}

} // namespace olp::backends
