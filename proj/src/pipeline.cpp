#include "olp/pipeline.hpp"
#include "olp/error.hpp"

#include <algorithm>

namespace olp::pipeline {

using grammar::RoleRequest;
using grammar::TopicSketch;

model::Chunk form_chunk(std::deque<model::Passage>& pending,
                        std::vector<model::Passage> carried, std::size_t max_chars) {
    model::Chunk chunk;
    chunk.carried_from_previous = carried.size();
    chunk.passages = std::move(carried);

    std::size_t chars = 0;
    for (const auto& p : chunk.passages) chars += p.text.size();

    bool took_any = false;
    while (!pending.empty()) {
        const auto& next = pending.front();
        if (next.text.size() > max_chars)
            throw data_error("passage " + std::to_string(next.index) + " exceeds max_chars (" +
                             std::to_string(next.text.size()) + " > " + std::to_string(max_chars) + ")");
        // the first pending passage is always admitted so the stream progresses
        // even when the carry alone fills the budget
        if (took_any && chars + next.text.size() > max_chars) break;
        chars += next.text.size();
        chunk.passages.push_back(next);
        pending.pop_front();
        took_any = true;
    }
    return chunk;
}

static RoleRequest base_request(const model::Chunk& chunk) {
    RoleRequest r;
    r.chunk = chunk;
    return r;
}

std::vector<std::string> find_topics(const model::Chunk& chunk, const InvokeFn& invoke) {
    if (chunk.empty()) throw config_error("find_topics: empty chunk");
    const auto completion = invoke(RoleId::TopicFinder, base_request(chunk));
    auto titles = grammar::parse_titles(completion.text);
    for (const auto& t : titles)
        if (t.empty()) throw data_error("topic finder returned an empty title");
    return titles;
}

std::vector<TopicSketch> locate_topics(const model::Chunk& chunk,
                                       const std::vector<std::string>& titles,
                                       const InvokeFn& invoke,
                                       std::vector<std::string>* warnings) {
    if (titles.empty()) throw config_error("locate_topics: no titles");
    auto request = base_request(chunk);
    request.titles = titles;
    const auto completion = invoke(RoleId::TopicLocator, request);
    auto sketches = grammar::parse_spans(completion.text);

    // keep the first span offered per requested title
    std::vector<TopicSketch> picked;
    for (const auto& title : titles) {
        const TopicSketch* found = nullptr;
        for (const auto& s : sketches)
            if (s.title == title) {
                found = &s;
                break;
            }
        if (!found)
            throw data_error("topic locator returned no span for \"" + title + "\"");
        picked.push_back(*found);
    }

    const std::int64_t lo = chunk.first_index();
    const std::int64_t hi = chunk.last_index();
    for (auto& s : picked) {
        s.span.first = std::max(s.span.first, lo);
        s.span.last = std::min(s.span.last, hi);
        if (s.span.first > s.span.last)
            throw data_error("topic locator span for \"" + s.title +
                             "\" lies outside the chunk");
    }

    std::stable_sort(picked.begin(), picked.end(),
                     [](const TopicSketch& a, const TopicSketch& b) {
                         return a.span.first < b.span.first;
                     });

    // overlapping neighbours are truncated at the midpoint boundary
    std::vector<TopicSketch> out;
    for (auto& s : picked) {
        if (!out.empty() && s.span.first <= out.back().span.last) {
            auto& prev = out.back();
            const std::int64_t mid = (prev.span.last + s.span.first) / 2;
            const std::int64_t boundary = std::max(mid, prev.span.first);
            prev.span.last = boundary;
            s.span.first = boundary + 1;
            if (s.span.first > s.span.last) {
                if (warnings)
                    warnings->push_back("dropped topic \"" + s.title +
                                        "\": span vanished after overlap truncation");
                continue;
            }
        }
        out.push_back(s);
    }
    return out;
}

std::vector<TopicSketch> check_relationships(const model::Chunk& chunk,
                                             std::vector<TopicSketch> topics,
                                             const InvokeFn& invoke,
                                             std::vector<std::string>* warnings) {
    if (topics.empty()) return topics;
    auto request = base_request(chunk);
    request.topics = topics;
    const auto completion = invoke(RoleId::RelationshipChecker, request);
    const auto decisions = grammar::parse_decisions(completion.text);

    struct Entry {
        TopicSketch sketch;
        bool alive = true;
    };
    std::vector<Entry> entries;
    for (auto& t : topics) entries.push_back({std::move(t), true});
    auto valid_pos = [&](int i) { return i >= 0 && i < static_cast<int>(entries.size()); };

    for (const auto& d : decisions) {
        if (d.kind == grammar::Decision::Delete) {
            if (valid_pos(d.first) && entries[d.first].alive)
                entries[d.first].alive = false;
            else if (warnings)
                warnings->push_back("ignored DELETE of missing topic " + std::to_string(d.first));
            continue;
        }
        // merge: both alive and adjacent in the surviving sequence
        if (!valid_pos(d.first) || !valid_pos(d.second) || d.first == d.second ||
            !entries[d.first].alive || !entries[d.second].alive) {
            if (warnings) warnings->push_back("ignored MERGE of unavailable topics");
            continue;
        }
        const int a = std::min(d.first, d.second);
        const int b = std::max(d.first, d.second);
        bool adjacent = true;
        for (int k = a + 1; k < b; ++k)
            if (entries[k].alive) adjacent = false;
        if (!adjacent) {
            if (warnings)
                warnings->push_back("ignored MERGE " + std::to_string(d.first) + " " +
                                    std::to_string(d.second) + ": topics are not adjacent");
            continue;
        }
        entries[a].sketch.span.first = std::min(entries[a].sketch.span.first, entries[b].sketch.span.first);
        entries[a].sketch.span.last = std::max(entries[a].sketch.span.last, entries[b].sketch.span.last);
        // merged topic keeps the first title
        entries[b].alive = false;
    }

    std::vector<TopicSketch> out;
    for (auto& e : entries)
        if (e.alive) out.push_back(std::move(e.sketch));
    return out;
}

model::ValidationReport check_format(const model::StructuredDocument& fragment,
                                     const std::vector<TopicSketch>& confirmed,
                                     const std::vector<std::string>& aspect_schema) {
    auto report = model::validate_document(fragment);
    if (fragment.aspect_schema != aspect_schema)
        report.violations.push_back("fragment aspect schema differs from the pipeline schema");
    if (fragment.topics.size() != confirmed.size()) {
        report.violations.push_back("fragment topic count differs from the confirmed topics");
        return report;
    }
    for (std::size_t i = 0; i < confirmed.size(); ++i) {
        if (fragment.topics[i].title != confirmed[i].title)
            report.violations.push_back("fragment topic " + std::to_string(i) +
                                        " title differs from the confirmed topic");
        if (fragment.topics[i].span != confirmed[i].span)
            report.violations.push_back("fragment topic " + std::to_string(i) +
                                        " span differs from the confirmed topic");
    }
    return report;
}

model::StructuredDocument organize_content(const model::Chunk& chunk,
                                           const std::vector<TopicSketch>& confirmed,
                                           const std::vector<std::string>& aspect_schema,
                                           const InvokeFn& invoke) {
    if (confirmed.empty()) {
        model::StructuredDocument empty;
        empty.aspect_schema = aspect_schema;
        return empty;
    }
    auto request = base_request(chunk);
    request.topics = confirmed;
    request.aspect_schema = aspect_schema;

    std::string feedback;
    for (int attempt = 0; attempt < 2; ++attempt) {
        request.feedback = feedback;
        const auto completion = invoke(RoleId::ContentOrganizer, request);
        model::StructuredDocument fragment;
        try {
            fragment = model::parse_document(completion.text);
        } catch (const Error& e) {
            feedback = std::string(e.what()) + "\n";
            continue;
        }
        const auto report = check_format(fragment, confirmed, aspect_schema);
        if (report.ok()) return fragment;
        feedback = report.to_string();
    }
    throw data_error("content organizer failed the format check twice");
}

SplitOutcome split_chunk(const model::Chunk& chunk,
                         const std::vector<TopicSketch>& topics,
                         bool more_input, std::size_t max_chars) {
    SplitOutcome out;
    if (chunk.empty()) return out;

    if (topics.empty() || !more_input) {
        out.finalize = chunk.passages;
        out.confirmed = topics;
        return out;
    }

    const auto& last = topics.back();
    std::size_t carry_chars = 0;
    for (const auto& p : chunk.passages) {
        if (p.index >= last.span.first) {
            out.carry.push_back(p);
            carry_chars += p.text.size();
        } else {
            out.finalize.push_back(p);
        }
    }
    out.confirmed.assign(topics.begin(), topics.end() - 1);

    if (carry_chars > max_chars) {
        // the deferred topic outgrew a whole chunk; flush it now
        out.finalize = chunk.passages;
        out.confirmed = topics;
        out.carry.clear();
        out.forced = true;
    }
    return out;
}

static model::TopicRecord unresolved_topic(const TopicSketch& sketch,
                                           const std::vector<std::string>& aspect_schema) {
    model::TopicRecord t;
    t.title = sketch.title;
    t.span = sketch.span;
    t.unresolved = true;
    for (const auto& name : aspect_schema) t.aspects.push_back({name, {}});
    return t;
}

// Even partition of the chunk among titles when the locator fails outright.
static std::vector<TopicSketch> fallback_sketches(const model::Chunk& chunk,
                                                  const std::vector<std::string>& titles) {
    std::vector<TopicSketch> out;
    const std::int64_t lo = chunk.first_index();
    const std::int64_t hi = chunk.last_index();
    const std::int64_t n = static_cast<std::int64_t>(titles.size());
    const std::int64_t width = hi - lo + 1;
    for (std::int64_t i = 0; i < n; ++i) {
        TopicSketch s;
        s.title = titles[static_cast<std::size_t>(i)];
        s.span.first = lo + i * width / n;
        s.span.last = (i == n - 1) ? hi : lo + (i + 1) * width / n - 1;
        if (s.span.first <= s.span.last) out.push_back(std::move(s));
    }
    return out;
}

StreamResult process_stream(const std::vector<model::Passage>& transcript,
                            const std::vector<std::string>& aspect_schema,
                            const InvokeFn& invoke, const Options& options) {
    StreamResult result;
    result.document.aspect_schema = aspect_schema;

    std::deque<model::Passage> pending(transcript.begin(), transcript.end());
    std::vector<model::Passage> carried;

    while (!pending.empty() || !carried.empty()) {
        model::Chunk chunk = form_chunk(pending, std::move(carried), options.max_chars);
        carried.clear();
        if (chunk.empty()) break;
        const bool more_input = !pending.empty();

        std::vector<std::string> titles;
        try {
            titles = find_topics(chunk, invoke);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Credentials) throw;
            result.warnings.push_back("topic finder failed: " + std::string(e.what()));
        }

        if (titles.empty()) {
            // preamble or dead air: the passages finalize without topics
            result.finalized_chunks.push_back({chunk.first_index(), chunk.last_index()});
            continue;
        }

        std::vector<TopicSketch> sketches;
        bool located = true;
        try {
            sketches = locate_topics(chunk, titles, invoke, &result.warnings);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Credentials) throw;
            result.warnings.push_back("topic locator failed: " + std::string(e.what()));
            sketches = fallback_sketches(chunk, titles);
            located = false;
        }
        if (sketches.empty()) {
            result.finalized_chunks.push_back({chunk.first_index(), chunk.last_index()});
            continue;
        }

        if (located) {
            try {
                sketches = check_relationships(chunk, sketches, invoke, &result.warnings);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::Credentials) throw;
                result.warnings.push_back("relationship checker failed: " + std::string(e.what()));
            }
        }
        if (sketches.empty()) {
            result.finalized_chunks.push_back({chunk.first_index(), chunk.last_index()});
            continue;
        }

        auto split = split_chunk(chunk, sketches, more_input, options.max_chars);
        if (split.forced)
            result.warnings.push_back("forced finalize: topic \"" + sketches.back().title +
                                      "\" exceeded max_chars");

        if (!split.confirmed.empty()) {
            if (located) {
                try {
                    auto fragment = organize_content(chunk, split.confirmed, aspect_schema, invoke);
                    for (auto& topic : fragment.topics)
                        result.document.topics.push_back(std::move(topic));
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::Credentials) throw;
                    result.warnings.push_back("content organizer failed: " + std::string(e.what()));
                    for (const auto& sketch : split.confirmed)
                        result.document.topics.push_back(unresolved_topic(sketch, aspect_schema));
                }
            } else {
                for (const auto& sketch : split.confirmed)
                    result.document.topics.push_back(unresolved_topic(sketch, aspect_schema));
            }
        }

        if (!split.finalize.empty())
            result.finalized_chunks.push_back(
                {split.finalize.front().index, split.finalize.back().index});
        carried = std::move(split.carry);
    }
    return result;
}

} // namespace olp::pipeline
