#include "olp/model.hpp"
#include "olp/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace olp::model {

using ordered_json = nlohmann::ordered_json;

std::size_t Chunk::total_chars() const {
    std::size_t n = 0;
    for (const auto& p : passages) n += p.text.size();
    return n;
}

const Passage* Chunk::find(std::int64_t index) const {
    for (const auto& p : passages)
        if (p.index == index) return &p;
    return nullptr;
}

const AspectList* TopicRecord::find_aspect(const std::string& name) const {
    for (const auto& a : aspects)
        if (a.name == name) return &a;
    return nullptr;
}

std::vector<std::string> aspect_preset(const std::string& name) {
    if (name == "live-commerce")
        return {"Opening", "Product description", "Price", "Order urging"};
    if (name == "news")
        return {"Facts", "Opinions", "Assumptions", "Future plans"};
    throw config_error("unknown aspect preset: " + name);
}

// --- transcript -------------------------------------------------------------

static std::string strip_trailing_ws(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.pop_back();
    return s;
}

std::vector<Passage> parse_transcript(std::istream& in, std::int64_t start_index) {
    std::vector<Passage> out;
    std::string line;
    std::int64_t next_auto = start_index;
    bool have_prev = false;
    std::int64_t prev_index = 0;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        line = strip_trailing_ws(line);
        if (line.empty()) continue;

        Passage p;
        if (line.front() == '{') {
            ordered_json j = ordered_json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("index") || !j.contains("text"))
                throw data_error("line " + std::to_string(line_no) + ": malformed passage record");
            if (!j["index"].is_number_integer() || j["index"].get<std::int64_t>() < 0)
                throw data_error("line " + std::to_string(line_no) + ": index must be a non-negative integer");
            p.index = j["index"].get<std::int64_t>();
            p.text = strip_trailing_ws(j["text"].get<std::string>());
        } else {
            p.index = next_auto;
            p.text = line;
        }

        if (p.text.empty())
            throw data_error("line " + std::to_string(line_no) + ": empty passage text");
        if (p.text.find('\n') != std::string::npos)
            throw data_error("line " + std::to_string(line_no) + ": passage text contains a newline");
        if (have_prev && p.index <= prev_index)
            throw data_error("line " + std::to_string(line_no) + ": passage index " +
                             std::to_string(p.index) + " does not increase past " +
                             std::to_string(prev_index));

        prev_index = p.index;
        have_prev = true;
        next_auto = p.index + 1;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Passage> parse_transcript(const std::string& text, std::int64_t start_index) {
    std::istringstream in(text);
    return parse_transcript(in, start_index);
}

std::string serialize_transcript(const std::vector<Passage>& passages) {
    std::string out;
    for (const auto& p : passages) {
        ordered_json j;
        j["index"] = p.index;
        j["text"] = p.text;
        out += j.dump();
        out += '\n';
    }
    return out;
}

// --- validation --------------------------------------------------------------

std::string ValidationReport::to_string() const {
    std::string s;
    for (const auto& v : violations) {
        s += v;
        s += '\n';
    }
    return s;
}

ValidationReport validate_document(const StructuredDocument& doc) {
    ValidationReport report;
    auto bad = [&](const std::string& msg) { report.violations.push_back(msg); };

    std::set<std::string> schema(doc.aspect_schema.begin(), doc.aspect_schema.end());
    if (schema.size() != doc.aspect_schema.size())
        bad("aspect schema contains duplicate names");

    const TopicRecord* prev = nullptr;
    for (std::size_t t = 0; t < doc.topics.size(); ++t) {
        const auto& topic = doc.topics[t];
        const std::string where = "topic " + std::to_string(t) + " (\"" + topic.title + "\")";

        if (topic.span.first > topic.span.last)
            bad(where + ": span first exceeds last");
        if (prev) {
            if (topic.span.first <= prev->span.last)
                bad(where + ": overlapping topics");
        }
        prev = &topic;

        // aspect names must equal the schema exactly, in order
        if (topic.aspects.size() != doc.aspect_schema.size()) {
            bad(where + ": aspect set differs from schema");
        } else {
            for (std::size_t a = 0; a < topic.aspects.size(); ++a)
                if (topic.aspects[a].name != doc.aspect_schema[a])
                    bad(where + ": aspect \"" + topic.aspects[a].name +
                        "\" does not match schema entry \"" + doc.aspect_schema[a] + "\"");
        }

        std::set<std::int64_t> seen;
        for (const auto& aspect : topic.aspects) {
            for (const auto& e : aspect.entries) {
                if (!topic.span.contains(e.index))
                    bad(where + ", aspect \"" + aspect.name + "\": index " +
                        std::to_string(e.index) + " outside span");
                if (!seen.insert(e.index).second)
                    bad(where + ": index " + std::to_string(e.index) +
                        " appears in more than one aspect");
            }
        }
    }
    return report;
}

// --- document JSON -----------------------------------------------------------

static ordered_json document_to_json(const StructuredDocument& doc) {
    ordered_json j;
    j["aspect_schema"] = doc.aspect_schema;
    j["topics"] = ordered_json::array();
    for (const auto& topic : doc.topics) {
        ordered_json jt;
        jt["title"] = topic.title;
        jt["span"] = ordered_json::array({topic.span.first, topic.span.last});
        ordered_json ja = ordered_json::object();
        for (const auto& aspect : topic.aspects) {
            ordered_json entries = ordered_json::array();
            for (const auto& e : aspect.entries)
                entries.push_back(ordered_json{{"index", e.index}, {"text", e.text}});
            ja[aspect.name] = std::move(entries);
        }
        jt["aspects"] = std::move(ja);
        if (topic.unresolved) jt["unresolved"] = true;
        j["topics"].push_back(std::move(jt));
    }
    return j;
}

static StructuredDocument document_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("aspect_schema") || !j.contains("topics"))
        throw data_error("document: expected object with aspect_schema and topics");
    StructuredDocument doc;
    doc.aspect_schema = j.at("aspect_schema").get<std::vector<std::string>>();
    for (const auto& jt : j.at("topics")) {
        TopicRecord topic;
        topic.title = jt.at("title").get<std::string>();
        const auto& span = jt.at("span");
        if (!span.is_array() || span.size() != 2)
            throw data_error("document: span must be [first,last]");
        topic.span = {span[0].get<std::int64_t>(), span[1].get<std::int64_t>()};
        for (auto it = jt.at("aspects").begin(); it != jt.at("aspects").end(); ++it) {
            AspectList aspect;
            aspect.name = it.key();
            for (const auto& je : it.value()) {
                AspectEntry e;
                e.index = je.at("index").get<std::int64_t>();
                e.text = je.value("text", std::string{});
                aspect.entries.push_back(std::move(e));
            }
            topic.aspects.push_back(std::move(aspect));
        }
        topic.unresolved = jt.value("unresolved", false);
        doc.topics.push_back(std::move(topic));
    }
    return doc;
}

std::string serialize_document(const StructuredDocument& doc) {
    auto report = validate_document(doc);
    if (!report.ok())
        throw data_error("refusing to serialize invalid document:\n" + report.to_string());
    return document_to_json(doc).dump(2) + "\n";
}

StructuredDocument parse_document(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded())
        throw data_error("document: not valid JSON");
    return document_from_json(j);
}

std::string render_document(const StructuredDocument& doc) {
    std::string out;
    for (const auto& topic : doc.topics) {
        out += "Topic: " + topic.title + "\n\n";
        int n = 0;
        for (const auto& aspect : topic.aspects) {
            out += "(" + std::to_string(++n) + ") " + aspect.name + ":\n";
            if (aspect.entries.empty()) {
                out += "    [None in the provided text]\n";
            } else {
                for (const auto& e : aspect.entries)
                    out += "    [" + std::to_string(e.index) + ", “" + e.text + "”]\n";
            }
            out += "\n";
        }
    }
    return out;
}

// --- config ------------------------------------------------------------------

void ExperimentConfig::validate() const {
    auto in_range = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    if (!(alpha > 0.0 && alpha <= 1.0)) throw config_error("alpha must be in (0,1]");
    if (!in_range(epsilon, 0.0, 1.0)) throw config_error("epsilon must be in [0,1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw config_error("gamma must be in [0,1)");
    if (!in_range(omega, 0.0, 1.0)) throw config_error("omega must be in [0,1]");
    if (k1 < 0) throw config_error("k1 must be >= 0");
    if (k2 < 0) throw config_error("k2 must be >= 0");
    if (!(v_wrong < 0 && 0 < v_correct)) throw config_error("v_wrong must be negative and v_correct positive");
    if (delta_w <= 0) throw config_error("delta_w must be positive");
    if (freeze_rounds < 0) throw config_error("freeze_rounds must be >= 0");
    if (tokens_in < 0 || tokens_out < 0) throw config_error("tokens_in/tokens_out must be >= 0");
    if (rounds <= 0) throw config_error("rounds must be positive");
    if (judge_every_n <= 0) throw config_error("judge_every_n must be positive");
    if (llm_pool.empty()) throw config_error("llm_pool must not be empty");
    for (const auto& e : task_schedule)
        if (e.from > e.to) throw config_error("task_schedule entry has from > to");
    for (const auto& p : profiles)
        if (p.input_price < 0 || p.output_price < 0)
            throw config_error("profile " + p.id + ": prices must be >= 0");
}

static ExperimentConfig config_from_json(const ordered_json& j, const std::filesystem::path& base_dir) {
    static const std::set<std::string> known = {
        "alpha", "epsilon", "gamma", "omega", "k1", "k2", "v_correct", "v_wrong",
        "delta_w", "freeze_rounds", "tokens_in", "tokens_out", "rounds",
        "judge_every_n", "seed", "llm_pool", "pool_schedule", "task_schedule",
        "tasks", "board_member", "baseline_llm", "pool_mode", "election_mode",
        "bill_partner", "profiles"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw config_error("unknown config key: " + it.key());

    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("alpha", c.alpha);
    get("epsilon", c.epsilon);
    get("gamma", c.gamma);
    get("omega", c.omega);
    get("k1", c.k1);
    get("k2", c.k2);
    get("v_correct", c.v_correct);
    get("v_wrong", c.v_wrong);
    get("delta_w", c.delta_w);
    get("freeze_rounds", c.freeze_rounds);
    get("tokens_in", c.tokens_in);
    get("tokens_out", c.tokens_out);
    get("rounds", c.rounds);
    get("judge_every_n", c.judge_every_n);
    get("seed", c.seed);
    get("llm_pool", c.llm_pool);
    get("board_member", c.board_member);
    get("baseline_llm", c.baseline_llm);
    get("bill_partner", c.bill_partner);

    if (j.contains("pool_schedule"))
        for (const auto& e : j.at("pool_schedule"))
            c.pool_schedule.push_back({e.at("round").get<int>(), e.at("llm").get<std::string>()});
    if (j.contains("task_schedule"))
        for (const auto& e : j.at("task_schedule"))
            c.task_schedule.push_back({e.at("from").get<int>(), e.at("to").get<int>(),
                                       e.at("task").get<std::string>()});
    if (j.contains("tasks"))
        for (auto it = j.at("tasks").begin(); it != j.at("tasks").end(); ++it) {
            std::filesystem::path p = it.value().get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            c.tasks[it.key()] = p.string();
        }
    if (j.contains("pool_mode")) {
        auto m = j.at("pool_mode").get<std::string>();
        if (m == "replace") c.pool_mode = PoolMode::Replace;
        else if (m == "expand") c.pool_mode = PoolMode::Expand;
        else throw config_error("pool_mode must be \"replace\" or \"expand\"");
    }
    if (j.contains("election_mode")) {
        auto m = j.at("election_mode").get<std::string>();
        if (m == "union") c.election_mode = ElectionMode::Union;
        else if (m == "maximal") c.election_mode = ElectionMode::Maximal;
        else throw config_error("election_mode must be \"union\" or \"maximal\"");
    }
    if (j.contains("profiles"))
        for (const auto& e : j.at("profiles"))
            c.profiles.push_back({e.at("id").get<std::string>(),
                                  e.value("display_name", e.at("id").get<std::string>()),
                                  e.at("input_price").get<double>(),
                                  e.at("output_price").get<double>()});

    c.validate();
    return c;
}

ExperimentConfig parse_config(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw config_error("config: not valid JSON");
    return config_from_json(j, std::filesystem::current_path());
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw config_error("config: not valid JSON: " + path);
    return config_from_json(j, std::filesystem::path(path).parent_path());
}

// --- task files ---------------------------------------------------------------

std::string serialize_task(const TaskSpec& task) {
    ordered_json j;
    j["id"] = task.id;
    j["topic_count"] = task.topic_count;
    j["chars_per_topic"] = task.chars_per_topic;
    j["transcript"] = ordered_json::array();
    for (const auto& p : task.transcript)
        j["transcript"].push_back(ordered_json{{"index", p.index}, {"text", p.text}});
    j["gold"] = document_to_json(task.gold);
    return j.dump(2) + "\n";
}

TaskSpec parse_task(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw data_error("task: not valid JSON");
    TaskSpec t;
    t.id = j.at("id").get<std::string>();
    t.topic_count = j.value("topic_count", 0);
    t.chars_per_topic = j.value("chars_per_topic", 0.0);
    for (const auto& jp : j.at("transcript"))
        t.transcript.push_back({jp.at("index").get<std::int64_t>(), jp.at("text").get<std::string>()});
    t.gold = document_from_json(j.at("gold"));

    // gold must reference only transcript indices
    std::set<std::int64_t> indices;
    for (const auto& p : t.transcript) indices.insert(p.index);
    for (const auto& topic : t.gold.topics)
        for (const auto& aspect : topic.aspects)
            for (const auto& e : aspect.entries)
                if (!indices.count(e.index))
                    throw data_error("task " + t.id + ": gold references missing index " +
                                     std::to_string(e.index));
    return t;
}

TaskSpec load_task(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open task file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_task(text);
}

} // namespace olp::model
