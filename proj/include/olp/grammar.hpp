#pragma once

#include "olp/model.hpp"
#include "olp/roles.hpp"

#include <string>
#include <vector>

namespace olp::grammar {

// A located-but-not-yet-organized topic.
struct TopicSketch {
    std::string title;
    model::Span span;

    bool operator==(const TopicSketch&) const = default;
};

// Everything a model-backed role gets to see for one call. The structured
// fields let the simulated and oracle backends answer without parsing the
// prompt; the HTTP backend only uses the rendered prompt text.
struct RoleRequest {
    model::Chunk chunk;
    std::vector<std::string> titles;       // TopicLocator input
    std::vector<TopicSketch> topics;       // RelationshipChecker / ContentOrganizer input
    std::vector<std::string> aspect_schema;
    std::string feedback;                  // format-checker violations on the retry
};

// Relationship-checker decision: "MERGE i j" or "DELETE i" (topic positions).
struct Decision {
    enum Kind { Merge, Delete } kind = Delete;
    int first = 0;
    int second = 0;

    bool operator==(const Decision&) const = default;
};

// prompt templates -----------------------------------------------------------

std::string render_prompt(RoleId role, const RoleRequest& request);

// response serialization (used by the oracle/simulated backends) -------------

std::string serialize_titles(const std::vector<std::string>& titles);
std::string serialize_spans(const std::vector<TopicSketch>& topics);
std::string serialize_decisions(const std::vector<Decision>& decisions);
// fragments reuse model::serialize_document

// response parsing (throws data_error on grammar violations) ------------------

std::vector<std::string> parse_titles(const std::string& text);
std::vector<TopicSketch> parse_spans(const std::string& text);
std::vector<Decision> parse_decisions(const std::string& text);

} // namespace olp::grammar
