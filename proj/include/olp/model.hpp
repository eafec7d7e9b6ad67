#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace olp::model {

// One indexed unit of transcript text. Indices are arbitrary non-negative
// integers (live transcripts ship 5-digit ids); within a transcript they are
// unique and strictly increasing in arrival order.
struct Passage {
    std::int64_t index = 0;
    std::string text;

    bool operator==(const Passage&) const = default;
};

// A window of contiguous passages handed to the model-backed roles.
// carried_from_previous counts the leading passages inherited from the
// previous chunk's last topic.
struct Chunk {
    std::vector<Passage> passages;
    std::size_t carried_from_previous = 0;

    bool empty() const { return passages.empty(); }
    std::int64_t first_index() const { return passages.front().index; }
    std::int64_t last_index() const { return passages.back().index; }
    std::size_t total_chars() const;
    const Passage* find(std::int64_t index) const;
};

// Inclusive passage-index interval.
struct Span {
    std::int64_t first = 0;
    std::int64_t last = 0;

    bool operator==(const Span&) const = default;
    std::int64_t size() const { return last - first + 1; }
    bool contains(std::int64_t i) const { return i >= first && i <= last; }
};

struct AspectEntry {
    std::int64_t index = 0;
    std::string text;

    bool operator==(const AspectEntry&) const = default;
};

// name -> supporting passages, in aspect-schema order.
struct AspectList {
    std::string name;
    std::vector<AspectEntry> entries;

    bool operator==(const AspectList&) const = default;
};

struct TopicRecord {
    std::string title;
    Span span;
    std::vector<AspectList> aspects;
    bool unresolved = false; // role failed; title kept, aspects left empty

    bool operator==(const TopicRecord&) const = default;
    const AspectList* find_aspect(const std::string& name) const;
};

struct StructuredDocument {
    std::vector<std::string> aspect_schema;
    std::vector<TopicRecord> topics;

    bool operator==(const StructuredDocument&) const = default;
};

// Identity and per-1M-token prices of a candidate model.
struct LlmProfile {
    std::string id;
    std::string display_name;
    double input_price = 0;  // $ / 1M input tokens
    double output_price = 0; // $ / 1M output tokens

    bool operator==(const LlmProfile&) const = default;
};

struct TaskSpec {
    std::string id;
    std::vector<Passage> transcript;
    StructuredDocument gold;
    int topic_count = 0;
    double chars_per_topic = 0; // informational
};

// Aspect presets named after the two scenarios the pipeline ships with.
std::vector<std::string> aspect_preset(const std::string& name); // "live-commerce" | "news"

// --- transcript ingestion -------------------------------------------------

// Line-delimited input: each line is either raw UTF-8 text or a JSON record
// {"index": <int>, "text": <string>}. Raw lines get sequential indices
// starting at start_index (continuing after any explicit index). Trailing
// whitespace is stripped; empty text and non-increasing explicit indices are
// ingestion errors naming the offending line.
std::vector<Passage> parse_transcript(std::istream& in, std::int64_t start_index = 0);
std::vector<Passage> parse_transcript(const std::string& text, std::int64_t start_index = 0);

// One JSON record per line; parse_transcript round-trips this exactly.
std::string serialize_transcript(const std::vector<Passage>& passages);

// --- document validation and serialization ---------------------------------

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Violations are data, not failures: always returns a report.
ValidationReport validate_document(const StructuredDocument& doc);

// Canonical JSON form; parse_document(serialize_document(d)) reproduces the
// bytes. Refuses documents that do not validate.
std::string serialize_document(const StructuredDocument& doc);
StructuredDocument parse_document(const std::string& json_text);

// Appendix-style human-readable rendering; empty aspects render the literal
// placeholder line "[None in the provided text]".
std::string render_document(const StructuredDocument& doc);

// --- experiment configuration ----------------------------------------------

struct PoolAddition {
    int round = 0;
    std::string llm;
};

struct TaskScheduleEntry {
    int from = 0; // inclusive
    int to = 0;   // inclusive
    std::string task;
};

enum class PoolMode { Replace, Expand };
enum class ElectionMode { Union, Maximal };

struct ExperimentConfig {
    double alpha = 0.1;
    double epsilon = 0.03;
    double gamma = 0.0;
    double omega = 0.03;
    double k1 = 1.0;
    double k2 = 0.1;
    double v_correct = 10.0;
    double v_wrong = -100.0;
    double delta_w = 0.01;
    int freeze_rounds = 100;
    std::int64_t tokens_in = 25000;
    std::int64_t tokens_out = 25000;
    int rounds = 2000;
    int judge_every_n = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> llm_pool;
    std::vector<PoolAddition> pool_schedule;
    std::vector<TaskScheduleEntry> task_schedule;
    std::map<std::string, std::string> tasks; // task id -> spec file path
    std::string board_member;                 // initial sole judge
    std::string baseline_llm;                 // strongest-only baseline
    PoolMode pool_mode = PoolMode::Replace;
    ElectionMode election_mode = ElectionMode::Union;
    bool bill_partner = true; // bill both executions of a cross-update round
    std::vector<LlmProfile> profiles; // empty -> built-in price table

    void validate() const; // throws config_error naming the field
};

// Flat key-value JSON mirroring ExperimentConfig; unknown keys rejected.
// Task file paths are resolved relative to the config file's directory.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

TaskSpec load_task(const std::string& path);
std::string serialize_task(const TaskSpec& task);
TaskSpec parse_task(const std::string& json_text);

} // namespace olp::model
