#include "olp/backends.hpp"
#include "olp/error.hpp"
#include "olp/harness.hpp"
#include "olp/metrics.hpp"
#include "olp/pipeline.hpp"

#include <doctest.h>

using namespace olp;
using namespace olp::pipeline;
using grammar::TopicSketch;

static std::deque<model::Passage> passages_of(int count, std::size_t chars, std::int64_t start = 0) {
    std::deque<model::Passage> out;
    for (int i = 0; i < count; ++i)
        out.push_back({start + i, std::string(chars, 'x')});
    return out;
}

static InvokeFn scripted(std::map<RoleId, std::string> responses) {
    return [responses](RoleId role, const grammar::RoleRequest&) {
        backends::Completion c;
        c.text = responses.at(role);
        return c;
    };
}

TEST_CASE("form_chunk fills greedily at passage boundaries") {
    auto pending = passages_of(3, 100);
    auto chunk = form_chunk(pending, {}, 250);
    CHECK(chunk.passages.size() == 2);
    CHECK(chunk.carried_from_previous == 0);
    CHECK(pending.size() == 1);
}

TEST_CASE("form_chunk leads with the carried passages") {
    auto pending = passages_of(2, 50, 10);
    std::vector<model::Passage> carried{{8, "aa"}, {9, "bb"}};
    auto chunk = form_chunk(pending, carried, 1000);
    REQUIRE(chunk.passages.size() == 4);
    CHECK(chunk.carried_from_previous == 2);
    CHECK(chunk.passages[0].index == 8);
    CHECK(chunk.passages[2].index == 10);
}

TEST_CASE("form_chunk on an empty stream is an empty chunk") {
    std::deque<model::Passage> pending;
    auto chunk = form_chunk(pending, {}, 100);
    CHECK(chunk.empty());
}

TEST_CASE("form_chunk rejects oversize passages by index") {
    auto pending = passages_of(1, 500, 42);
    CHECK_THROWS_WITH_AS(form_chunk(pending, {}, 100), doctest::Contains("42"), Error);
}

TEST_CASE("form_chunk admits one passage even when the carry fills the budget") {
    auto pending = passages_of(2, 90, 10);
    std::vector<model::Passage> carried{{9, std::string(100, 'c')}};
    auto chunk = form_chunk(pending, carried, 100);
    CHECK(chunk.passages.size() == 2); // carry + one pending
    CHECK(pending.size() == 1);
}

TEST_CASE("find_topics deduplicates titles preserving order") {
    auto pending = passages_of(3, 10);
    auto chunk = form_chunk(pending, {}, 100);
    auto invoke = scripted({{RoleId::TopicFinder, "alpha\nbeta\nalpha\n"}});
    CHECK(find_topics(chunk, invoke) == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("locate_topics clips, orders and truncates overlaps at the midpoint") {
    auto pending = passages_of(10, 10); // indices 0..9
    auto chunk = form_chunk(pending, {}, 1000);
    auto invoke = scripted({{RoleId::TopicLocator, "a\t0\t6\nb\t4\t9\n"}});
    auto spans = locate_topics(chunk, {"a", "b"}, invoke);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].span == model::Span{0, 5});
    CHECK(spans[1].span == model::Span{6, 9});
}

TEST_CASE("locate_topics clips to the chunk and fails on foreign spans") {
    auto pending = passages_of(5, 10, 100); // 100..104
    auto chunk = form_chunk(pending, {}, 1000);

    auto clip = scripted({{RoleId::TopicLocator, "a\t90\t200\n"}});
    auto spans = locate_topics(chunk, {"a"}, clip);
    CHECK(spans[0].span == model::Span{100, 104});

    auto outside = scripted({{RoleId::TopicLocator, "a\t0\t7\n"}});
    CHECK_THROWS_AS(locate_topics(chunk, {"a"}, outside), Error);

    auto missing = scripted({{RoleId::TopicLocator, "other\t100\t101\n"}});
    CHECK_THROWS_AS(locate_topics(chunk, {"a"}, missing), Error);
}

TEST_CASE("check_relationships merges adjacent topics into the hull") {
    auto pending = passages_of(10, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"first", {0, 3}}, {"second", {4, 7}}, {"third", {8, 9}}};

    auto merge = scripted({{RoleId::RelationshipChecker, "MERGE 0 1\n"}});
    auto merged = check_relationships(chunk, topics, merge);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].title == "first");
    CHECK(merged[0].span == model::Span{0, 7});
    CHECK(merged[1].title == "third");
}

TEST_CASE("check_relationships deletes a topic and keeps spans") {
    auto pending = passages_of(10, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"a", {0, 3}}, {"b", {4, 7}}, {"c", {8, 9}}};
    auto del = scripted({{RoleId::RelationshipChecker, "DELETE 1\n"}});
    auto out = check_relationships(chunk, topics, del);
    REQUIRE(out.size() == 2);
    CHECK(out[0].span == model::Span{0, 3});
    CHECK(out[1].span == model::Span{8, 9});
}

TEST_CASE("check_relationships ignores non-adjacent merges with a warning") {
    auto pending = passages_of(10, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"a", {0, 3}}, {"b", {4, 7}}, {"c", {8, 9}}};
    std::vector<std::string> warnings;
    auto bad = scripted({{RoleId::RelationshipChecker, "MERGE 0 2\n"}});
    auto out = check_relationships(chunk, topics, bad, &warnings);
    CHECK(out.size() == 3);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("not adjacent") != std::string::npos);
}

TEST_CASE("check_relationships no-op on an empty decision list") {
    auto pending = passages_of(4, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"a", {0, 1}}, {"b", {2, 3}}};
    auto keep = scripted({{RoleId::RelationshipChecker, ""}});
    CHECK(check_relationships(chunk, topics, keep) == topics);
}

TEST_CASE("organize_content retries once with feedback then fails") {
    auto pending = passages_of(4, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> confirmed{{"a", {0, 3}}};
    const std::vector<std::string> schema{"Facts", "Opinions", "Assumptions", "Future plans"};

    model::StructuredDocument good;
    good.aspect_schema = schema;
    good.topics.push_back({"a", {0, 3}, {{"Facts", {{0, "x"}}},
                                         {"Opinions", {}},
                                         {"Assumptions", {}},
                                         {"Future plans", {}}}});

    int calls = 0;
    bool saw_feedback = false;
    auto flaky = [&](RoleId role, const grammar::RoleRequest& req) {
        REQUIRE(role == RoleId::ContentOrganizer);
        ++calls;
        if (!req.feedback.empty()) saw_feedback = true;
        backends::Completion c;
        c.text = calls == 1 ? "this is not json" : model::serialize_document(good);
        return c;
    };
    auto fragment = organize_content(chunk, confirmed, schema, flaky);
    CHECK(calls == 2);
    CHECK(saw_feedback);
    CHECK(fragment == good);

    auto always_bad = scripted({{RoleId::ContentOrganizer, "still not json"}});
    CHECK_THROWS_AS(organize_content(chunk, confirmed, schema, always_bad), Error);
}

TEST_CASE("organize_content with no confirmed topics is an empty fragment") {
    auto pending = passages_of(2, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    auto invoke = scripted({});
    auto fragment = organize_content(chunk, {}, {"Facts"}, invoke);
    CHECK(fragment.topics.empty());
}

TEST_CASE("split_chunk defers the last topic") {
    auto pending = passages_of(16, 10); // 0..15
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"t1", {0, 9}}, {"t2", {10, 15}}};

    auto split = split_chunk(chunk, topics, true, 1000);
    REQUIRE(split.confirmed.size() == 1);
    CHECK(split.confirmed[0].title == "t1");
    CHECK(split.finalize.front().index == 0);
    CHECK(split.finalize.back().index == 9);
    CHECK(split.carry.front().index == 10);
    CHECK(split.carry.back().index == 15);
}

TEST_CASE("split_chunk carries everything for a lone mid-stream topic") {
    auto pending = passages_of(6, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"only", {0, 5}}};
    auto split = split_chunk(chunk, topics, true, 1000);
    CHECK(split.finalize.empty());
    CHECK(split.confirmed.empty());
    CHECK(split.carry.size() == 6);
}

TEST_CASE("split_chunk flushes at end of stream") {
    auto pending = passages_of(16, 10);
    auto chunk = form_chunk(pending, {}, 1000);
    std::vector<TopicSketch> topics{{"t1", {0, 9}}, {"t2", {10, 15}}};
    auto split = split_chunk(chunk, topics, false, 1000);
    CHECK(split.carry.empty());
    CHECK(split.confirmed.size() == 2);
    CHECK(split.finalize.size() == 16);
}

TEST_CASE("split_chunk forces a finalize when the carry outgrows the budget") {
    auto pending = passages_of(12, 100); // 1200 chars
    auto chunk = form_chunk(pending, {}, 2000);
    std::vector<TopicSketch> topics{{"t1", {0, 1}}, {"big", {2, 11}}};
    auto split = split_chunk(chunk, topics, true, 500);
    CHECK(split.forced);
    CHECK(split.carry.empty());
    CHECK(split.confirmed.size() == 2);
}

TEST_CASE("the worked live-commerce chunk flows through end to end") {
    model::TaskSpec task;
    task.id = "appendix";
    task.topic_count = 1;
    task.gold.aspect_schema = {"Opening", "Product description", "Price", "Order urging"};
    model::TopicRecord topic;
    topic.title = "Anchor prime one hundred watts wall charger";
    topic.span = {54461, 54468};
    for (std::int64_t i = 54461; i <= 54468; ++i)
        task.transcript.push_back({i, "passage " + std::to_string(i)});
    auto entry = [&](std::int64_t i) {
        return model::AspectEntry{i, "passage " + std::to_string(i)};
    };
    topic.aspects = {{"Opening", {entry(54461)}},
                     {"Product description",
                      {entry(54462), entry(54463), entry(54464), entry(54465), entry(54466)}},
                     {"Price", {entry(54468)}},
                     {"Order urging", {entry(54467)}}};
    task.gold.topics.push_back(topic);

    auto invoke = [&](RoleId role, const grammar::RoleRequest& request) {
        backends::Invocation inv{role, "oracle", "p", request};
        return backends::oracle_invoke(inv, task);
    };
    auto chunk_titles = [&] {
        std::deque<model::Passage> pending(task.transcript.begin(), task.transcript.end());
        auto chunk = form_chunk(pending, {}, 6000);
        return find_topics(chunk, invoke);
    }();
    CHECK(chunk_titles ==
          std::vector<std::string>{"Anchor prime one hundred watts wall charger"});

    std::deque<model::Passage> pending(task.transcript.begin(), task.transcript.end());
    auto chunk = form_chunk(pending, {}, 6000);
    auto located = locate_topics(chunk, chunk_titles, invoke);
    REQUIRE(located.size() == 1);
    CHECK(located[0].span == model::Span{54461, 54468});

    auto result = process_stream(task.transcript, task.gold.aspect_schema, invoke, {});
    CHECK(result.document == task.gold);
    CHECK(metrics::recall_rate(result.document, task.gold) == 1.0);
}

static pipeline::InvokeFn oracle_invoke_fn(const model::TaskSpec& task) {
    return [task](RoleId role, const grammar::RoleRequest& request) {
        backends::Invocation inv{role, "oracle", "p", request};
        return backends::oracle_invoke(inv, task);
    };
}

TEST_CASE("process_stream with oracle backends reproduces the gold document") {
    harness::SynthOptions opt;
    opt.id = "stream";
    opt.topics = 8;
    opt.chars_per_topic = 300;
    auto task = harness::make_synth_task(17, opt);

    Options options;
    options.max_chars = 900; // force several chunks
    auto result = process_stream(task.transcript, task.gold.aspect_schema,
                                 oracle_invoke_fn(task), options);

    CHECK(result.warnings.empty());
    CHECK(model::validate_document(result.document).ok());
    CHECK(metrics::recall_rate(result.document, task.gold) == 1.0);
    CHECK(result.document == task.gold);
}

TEST_CASE("process_stream on an empty transcript is an empty document") {
    auto result = process_stream({}, model::aspect_preset("news"),
                                 scripted({}), {});
    CHECK(result.document.topics.empty());
    CHECK(result.finalized_chunks.empty());
}

TEST_CASE("process_stream conserves passages exactly once") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        harness::SynthOptions opt;
        opt.id = "conserve";
        opt.topics = 12;
        opt.chars_per_topic = 250;
        auto task = harness::make_synth_task(seed, opt);

        Options options;
        options.max_chars = 700;
        auto result = process_stream(task.transcript, task.gold.aspect_schema,
                                     oracle_invoke_fn(task), options);

        std::map<std::int64_t, int> seen;
        for (const auto& span : result.finalized_chunks)
            for (std::int64_t i = span.first; i <= span.last; ++i) ++seen[i];
        CHECK(seen.size() == task.transcript.size());
        for (const auto& p : task.transcript) CHECK(seen[p.index] == 1);
    }
}

TEST_CASE("process_stream marks topics unresolved when the organizer dies") {
    harness::SynthOptions opt;
    opt.id = "broken";
    opt.topics = 4;
    opt.chars_per_topic = 200;
    auto task = harness::make_synth_task(23, opt);

    auto invoke = [&](RoleId role, const grammar::RoleRequest& request) {
        if (role == RoleId::ContentOrganizer) {
            backends::Completion c;
            c.text = "garbage";
            return c;
        }
        backends::Invocation inv{role, "oracle", "p", request};
        return backends::oracle_invoke(inv, task);
    };
    auto result = process_stream(task.transcript, task.gold.aspect_schema, invoke, {});
    REQUIRE(result.document.topics.size() == task.gold.topics.size());
    for (const auto& t : result.document.topics) {
        CHECK(t.unresolved);
        for (const auto& a : t.aspects) CHECK(a.entries.empty());
    }
    CHECK(model::validate_document(result.document).ok());
    CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("process_stream treats a zero-title chunk as preamble") {
    auto invoke = [&](RoleId role, const grammar::RoleRequest&) {
        REQUIRE(role == RoleId::TopicFinder);
        return backends::Completion{};
    };
    std::vector<model::Passage> transcript;
    for (int i = 0; i < 5; ++i) transcript.push_back({i, "chit chat"});
    auto result = process_stream(transcript, model::aspect_preset("news"), invoke, {});
    CHECK(result.document.topics.empty());
    REQUIRE(result.finalized_chunks.size() == 1);
    CHECK(result.finalized_chunks[0] == model::Span{0, 4});
}
