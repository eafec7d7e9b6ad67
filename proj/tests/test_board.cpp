#include "olp/board.hpp"
#include "olp/error.hpp"
#include "olp/rng.hpp"

#include <doctest.h>

#include <optional>
#include <set>

using namespace olp;
using namespace olp::board;
using rlcore::Outcome;
using rlcore::QState;
using rlcore::QTable;

TEST_CASE("representative_table adds the cost back per role") {
    std::vector<QTable> tables(4, QTable("r", {"cheap", "dear"}));
    std::vector<const QTable*> ptrs;
    for (auto& t : tables) ptrs.push_back(&t);

    auto rep = representative_table(ptrs, {0.004, 2.25}, 1.0);
    for (const auto& row : rep.values()) {
        CHECK(row[0] == doctest::Approx(0.016).epsilon(1e-12));
        CHECK(row[1] == doctest::Approx(9.0).epsilon(1e-12));
    }
}

TEST_CASE("representative_table with k1=0 is the plain sum") {
    QTable t("r", {"a"});
    t.set_value({"a", Outcome::Success}, 0, 1.25);
    auto rep = representative_table({&t}, {0.5}, 0.0);
    CHECK(rep.value({"a", Outcome::Success}, 0) == 1.25);
}

TEST_CASE("representative_table sums cells and cost") {
    QTable t1("r", {"a"}), t2("r", {"a"});
    t1.set_value({"a", Outcome::Success}, 0, 1.0);
    t2.set_value({"a", Outcome::Success}, 0, 2.0);
    auto rep = representative_table({&t1, &t2}, {0.05}, 1.0);
    CHECK(rep.value({"a", Outcome::Success}, 0) == doctest::Approx(3.1).epsilon(1e-12));
}

TEST_CASE("representative_table rejects mismatched action sets") {
    QTable t1("r", {"a"}), t2("r", {"b"});
    CHECK_THROWS_AS(representative_table({&t1, &t2}, {0.05}, 1.0), Error);
}

TEST_CASE("chain_table keeps never-updated rows at zero") {
    QTable t("r", {"a", "b"});
    t.set_value({"a", Outcome::Failure}, 1, 0.9);
    auto walk = chain_table(t, {0.1, 0.2}, 1.0);
    CHECK(walk.value({"a", Outcome::Failure}, 0) == doctest::Approx(0.1));
    CHECK(walk.value({"a", Outcome::Failure}, 1) == doctest::Approx(1.1));
    CHECK(walk.row_all_zero({"b", Outcome::Failure}));
    CHECK(walk.row_all_zero({"a", Outcome::Success}));
}

// failure rows point the walk up the capability order until a model that
// never failed ends it
TEST_CASE("extract_chain follows failure argmax to the terminal") {
    QTable t("role-a", {"llm1", "llm2", "llm3", "llm4"});
    t.set_value({"llm1", Outcome::Failure}, 1, 5.0);
    t.set_value({"llm2", Outcome::Failure}, 2, 4.0);
    t.set_value({"llm4", Outcome::Failure}, 2, 1.0);
    // llm3's failure row stays all-zero: it never failed

    auto chain = extract_chain(t, "llm1");
    CHECK(chain.nodes == std::vector<std::string>{"llm1", "llm2", "llm3"});
    REQUIRE_FALSE(chain.is_loop());
    CHECK(*chain.terminal == "llm3");
}

TEST_CASE("extract_chain on an all-zero table terminates at the start") {
    QTable t("r", {"a", "b"});
    auto chain = extract_chain(t, "a");
    CHECK(chain.nodes == std::vector<std::string>{"a"});
    CHECK(*chain.terminal == "a");
}

TEST_CASE("extract_chain detects loops") {
    QTable t("r", {"a", "b"});
    t.set_value({"a", Outcome::Failure}, 1, 1.0);
    t.set_value({"b", Outcome::Failure}, 0, 1.0);
    auto chain = extract_chain(t, "a");
    CHECK(chain.is_loop());
    CHECK(chain.nodes == std::vector<std::string>{"a", "b", "a"});
}

TEST_CASE("extract_chain treats a self-argmax as terminal") {
    QTable t("r", {"a", "b"});
    t.set_value({"a", Outcome::Failure}, 0, 2.0);
    t.set_value({"a", Outcome::Failure}, 1, 1.0);
    auto chain = extract_chain(t, "a");
    CHECK(*chain.terminal == "a");
    CHECK(chain.nodes == std::vector<std::string>{"a"});
}

// brute-force reference walker, deliberately separate from the production code
static ChainResult naive_walk(const QTable& t, const std::string& start) {
    ChainResult r;
    r.role = t.role();
    std::set<std::string> seen;
    std::string cur = start;
    for (;;) {
        r.nodes.push_back(cur);
        seen.insert(cur);
        const QState fail{cur, Outcome::Failure};
        bool any = false;
        for (double v : t.row(fail))
            if (v != 0.0) any = true;
        if (!any) {
            r.terminal = cur;
            return r;
        }
        std::size_t best = 0;
        const auto& row = t.row(fail);
        for (std::size_t i = 1; i < row.size(); ++i)
            if (row[i] > row[best]) best = i;
        const std::string next = t.actions()[best];
        if (next == cur) {
            r.terminal = cur;
            return r;
        }
        if (seen.count(next)) {
            r.nodes.push_back(next);
            r.terminal = std::nullopt;
            return r;
        }
        cur = next;
    }
}

TEST_CASE("extract_chain matches the brute-force walker on random tables") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        QTable t("r", {"a", "b", "c", "d", "e", "f"});
        for (std::size_t row = 0; row < 12; ++row) {
            if (rng.next_below(3) == 0) continue; // leave some rows all-zero
            for (std::size_t col = 0; col < 6; ++col)
                t.values()[row][col] = rng.next_double() * 10 - 5;
        }
        const std::string start = t.actions()[rng.next_below(6)];
        auto fast = extract_chain(t, start);
        auto slow = naive_walk(t, start);
        CHECK(fast.nodes == slow.nodes);
        CHECK(fast.terminal == slow.terminal);
    }
}

TEST_CASE("elect_members unions the non-loop terminals") {
    ChainResult a{"A", {"llm1", "llm2", "llm3"}, "llm3"};
    ChainResult b{"B", {"llm1", "llm3", "llm5"}, "llm5"};
    ChainResult c{"C", {"llm2", "llm3", "llm4"}, "llm4"};
    auto elected = elect_members({a, b, c});
    REQUIRE(elected.has_value());
    CHECK(*elected == std::set<std::string>{"llm3", "llm4", "llm5"});

    SUBCASE("maximal mode prunes dominated terminals") {
        auto maximal = elect_members({a, b, c}, true);
        REQUIRE(maximal.has_value());
        CHECK(*maximal == std::set<std::string>{"llm4", "llm5"});
    }
}

TEST_CASE("elect_members single role") {
    ChainResult only{"A", {"llm1", "llm2"}, "llm2"};
    auto elected = elect_members({only});
    CHECK(*elected == std::set<std::string>{"llm2"});
}

TEST_CASE("elect_members is vacuous when every chain loops") {
    ChainResult a{"A", {"x", "y", "x"}, std::nullopt};
    ChainResult b{"B", {"y", "x", "y"}, std::nullopt};
    CHECK_FALSE(elect_members({a, b}).has_value());
}

TEST_CASE("step_weights leaves frozen rounds untouched") {
    BoardState board;
    board.weights = {{"gemini-1.5-pro", 1.0}};
    board.frozen_until = 100;
    board.delta_w = 0.01;
    auto next = step_weights(board, std::set<std::string>{"claude-3-opus"}, 50);
    CHECK(next.weights == board.weights);
}

TEST_CASE("step_weights is a no-op at the target") {
    BoardState board;
    board.weights = {{"claude-3-opus", 1.0}};
    board.frozen_until = 0;
    auto next = step_weights(board, std::set<std::string>{"claude-3-opus"}, 10);
    CHECK(next.weights == board.weights);
}

TEST_CASE("step_weights keeps the board on a vacuous election") {
    BoardState board;
    board.weights = {{"gemini-1.5-pro", 1.0}};
    board.frozen_until = 0;
    auto next = step_weights(board, std::nullopt, 10);
    CHECK(next.weights == board.weights);
}

TEST_CASE("the elected member becomes sole judge exactly at round 200") {
    BoardState board;
    board.weights = {{"gemini-1.5-pro", 1.0}};
    board.frozen_until = 100;
    board.delta_w = 0.01;
    const std::set<std::string> elected{"claude-3-opus"};

    int sole_round = -1;
    for (int round = 0; round < 300 && sole_round < 0; ++round) {
        // the board in effect at `round` was produced by the step at round-1
        if (board.weights.size() == 1 && board.weights.count("claude-3-opus") &&
            board.weights.at("claude-3-opus") == 1.0)
            sole_round = round;
        board = step_weights(board, elected, round);
    }
    CHECK(sole_round == 200);
}

TEST_CASE("step_weights caps per-round movement and renormalizes") {
    BoardState board;
    board.weights = {{"a", 0.6}, {"b", 0.4}};
    board.frozen_until = 0;
    board.delta_w = 0.01;
    auto next = step_weights(board, std::set<std::string>{"a"}, 5);
    double sum = 0;
    for (auto& [id, w] : next.weights) {
        CHECK(std::abs(w - board.weights.at(id)) <= 0.01 + 1e-12);
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("aggregate_judgments computes the weighted score") {
    BoardState board;
    board.weights = {{"a", 0.7}, {"b", 0.3}};
    auto result = aggregate_judgments({{"a", 10.0, std::nullopt}, {"b", -100.0, "fixed"}}, board);
    CHECK(result.v == doctest::Approx(-23.0).epsilon(1e-12));
    CHECK(result.revision == "fixed");
}

TEST_CASE("aggregate_judgments single member") {
    BoardState board;
    board.weights = {{"a", 1.0}};
    auto result = aggregate_judgments({{"a", 10.0, std::nullopt}}, board);
    CHECK(result.v == 10.0);
    CHECK_FALSE(result.revision.has_value());
}

TEST_CASE("aggregate_judgments picks the highest-weight revision") {
    BoardState board;
    board.weights = {{"a", 0.6}, {"b", 0.4}};
    auto result = aggregate_judgments({{"b", 2.0, "from-b"}, {"a", 1.0, "from-a"}}, board);
    CHECK(result.revision == "from-a");
}

TEST_CASE("aggregate_judgments rejects zero-weight members") {
    BoardState board;
    board.weights = {{"a", 1.0}, {"b", 0.0}};
    CHECK_THROWS_AS(aggregate_judgments({{"b", 1.0, std::nullopt}}, board), Error);
    BoardState empty;
    CHECK_THROWS_AS(aggregate_judgments({}, empty), Error);
}

TEST_CASE("aggregate_judgments is permutation invariant") {
    BoardState board;
    board.weights = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
    std::vector<Judgment> js{{"a", 3.0, std::nullopt}, {"b", -7.0, std::nullopt},
                             {"c", 1.0, std::nullopt}};
    const double v1 = aggregate_judgments(js, board).v;
    std::swap(js[0], js[2]);
    CHECK(aggregate_judgments(js, board).v == doctest::Approx(v1).epsilon(1e-12));
}
