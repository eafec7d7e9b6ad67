#pragma once

#include "olp/backends.hpp"
#include "olp/grammar.hpp"
#include "olp/model.hpp"
#include "olp/roles.hpp"

#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace olp::pipeline {

// One call into whichever backend is bound to the role.
using InvokeFn =
    std::function<backends::Completion(RoleId role, const grammar::RoleRequest& request)>;

struct Options {
    std::size_t max_chars = 6000;
};

// Greedy chunk formation: the carried passages plus as many pending passages
// as fit in max_chars, cut at passage boundaries only. Always admits at least
// one pending passage so the stream makes progress. A single passage larger
// than max_chars is an oversize error naming its index.
model::Chunk form_chunk(std::deque<model::Passage>& pending,
                        std::vector<model::Passage> carried, std::size_t max_chars);

// Titles in order of first appearance, deduplicated.
std::vector<std::string> find_topics(const model::Chunk& chunk, const InvokeFn& invoke);

// One clipped span per title, ordered and made disjoint by truncating
// overlaps at the midpoint. Spans with no indices in the chunk fail the role.
std::vector<grammar::TopicSketch> locate_topics(const model::Chunk& chunk,
                                                const std::vector<std::string>& titles,
                                                const InvokeFn& invoke,
                                                std::vector<std::string>* warnings = nullptr);

// Applies DELETE and adjacent-MERGE decisions; a merge keeps the first
// topic's title and the hull of both spans. Non-adjacent merge proposals are
// ignored with a warning.
std::vector<grammar::TopicSketch> check_relationships(const model::Chunk& chunk,
                                                      std::vector<grammar::TopicSketch> topics,
                                                      const InvokeFn& invoke,
                                                      std::vector<std::string>* warnings = nullptr);

// Organizes the confirmed topics into a validated document fragment. One
// retry with the format checker's violations appended to the prompt; a second
// failure throws (the driver marks the topics unresolved).
model::StructuredDocument organize_content(const model::Chunk& chunk,
                                           const std::vector<grammar::TopicSketch>& confirmed,
                                           const std::vector<std::string>& aspect_schema,
                                           const InvokeFn& invoke);

// Hard-coded format checker: structural validity plus agreement with the
// confirmed topics. Empty report means the fragment passed.
model::ValidationReport check_format(const model::StructuredDocument& fragment,
                                     const std::vector<grammar::TopicSketch>& confirmed,
                                     const std::vector<std::string>& aspect_schema);

struct SplitOutcome {
    std::vector<model::Passage> finalize;        // passages leaving the stream now
    std::vector<grammar::TopicSketch> confirmed; // topics finalized with them
    std::vector<model::Passage> carry;           // last topic's passages, deferred
    bool forced = false;                         // carry outgrew max_chars
};

// Defers the last topic to the next chunk so no topic is ever split across
// chunks; flushes everything at end of stream.
SplitOutcome split_chunk(const model::Chunk& chunk,
                         const std::vector<grammar::TopicSketch>& topics,
                         bool more_input, std::size_t max_chars);

struct StreamResult {
    model::StructuredDocument document;
    std::vector<model::Span> finalized_chunks; // index range finalized per iteration
    std::vector<std::string> warnings;
};

// Drives the six roles over the whole transcript. Role failures never abort
// the stream: affected topics are emitted unresolved (title kept, aspects
// empty).
StreamResult process_stream(const std::vector<model::Passage>& transcript,
                            const std::vector<std::string>& aspect_schema,
                            const InvokeFn& invoke, const Options& options = {});

} // namespace olp::pipeline
