#include "doctest.h"

#include "adaptida/artificial.hpp"
#include "adaptida/puzzle.hpp"
#include "adaptida/search.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace adaptida;

namespace {

// Single-state space whose root is the goal.
struct TrivialSpace {
    using State = int;
    int initial() const { return 0; }
    Cost heuristic(int) const { return 0; }
    bool is_goal(int) const { return true; }
    int operator_count() const { return 1; }
    void successors(int, int, std::vector<Successor<int>>&) const {}
};

// Finite space without goals: a chain of three states.
struct DeadEnd {
    using State = int;
    int initial() const { return 0; }
    Cost heuristic(int) const { return 0; }
    bool is_goal(int) const { return false; }
    int operator_count() const { return 1; }
    void successors(int s, int, std::vector<Successor<int>>& out) const {
        if (s < 2)
            out.push_back({s + 1, 0, 1});
    }
};

ArtificialSpec balanced(int d, int b, double g) {
    ArtificialSpec s;
    s.d = d;
    s.b = b;
    s.g = g;
    s.herror = 0;
    s.imbalance = 0;
    return s;
}

// Smallest f above `t` among nodes reachable through f <= t ancestors.
Cost frontier_scan(const FifteenPuzzle& p, const PuzzleState& s, int g, int parent, Cost t) {
    const Cost f = g + manhattan_heuristic(s);
    if (f > t)
        return f;
    Cost best = kInfiniteCost;
    for (auto m : kUpLeftRightDown) {
        if (parent >= 0 && static_cast<int>(m) == 3 - parent)
            continue;
        if (auto n = apply_move(s, m))
            best = std::min(best, frontier_scan(p, *n, g + 1, static_cast<int>(m), t));
    }
    return best;
}

}  // namespace

TEST_CASE("root that is a goal is found with one expansion") {
    TrivialSpace p;
    const auto r = cost_bounded_dfs(p, make_root(p), 0, OrderPolicy{});
    REQUIRE(r.solution);
    CHECK(r.solution->path.empty());
    CHECK(r.solution->cost == 0);
    CHECK(r.nodes_expanded == 1);

    const auto out = serial_idastar(p, OrderPolicy{});
    CHECK(out.solution.cost == 0);
    CHECK(out.iterations.size() == 1);
}

TEST_CASE("threshold below the root prunes it") {
    ArtificialTree t(balanced(3, 3, 0.0));
    const auto root = make_root(t);
    const auto r = cost_bounded_dfs(t, root, root.f() - 1, OrderPolicy{});
    CHECK(r.nodes_expanded == 0);
    CHECK_FALSE(r.solution);
    REQUIRE(r.min_exceeding_f);
    CHECK(*r.min_exceeding_f == root.f());
}

TEST_CASE("leftmost goal of a two-level tree") {
    ArtificialTree t(balanced(2, 3, 0.0));
    const auto r = cost_bounded_dfs(t, make_root(t), 2, OrderPolicy{});
    REQUIRE(r.solution);
    CHECK(r.solution->path == std::vector<int>{0, 0});
    // Root, child 0 and the goal; the exact heuristic prunes everything else.
    CHECK(r.nodes_expanded == 3);
}

TEST_CASE("next threshold passes the bound through or signals exhaustion") {
    PassResult r;
    r.min_exceeding_f = 14;
    CHECK(next_threshold(r) == 14);
    CHECK_THROWS_AS(next_threshold(PassResult{}), SpaceExhausted);
    CHECK_THROWS_AS(serial_idastar(DeadEnd{}, OrderPolicy{}), SpaceExhausted);
}

TEST_CASE("puzzle threshold steps by two and matches a frontier scan") {
    const auto s = parse_puzzle_line("14 1 9 6 4 8 12 5 7 2 3 0 10 11 13 15", 1);
    FifteenPuzzle p(s);
    const auto root = make_root(p);
    const auto r = cost_bounded_dfs(p, root, root.h, OrderPolicy{});
    REQUIRE(r.min_exceeding_f);
    CHECK(*r.min_exceeding_f == root.h + 2);
    CHECK(*r.min_exceeding_f == frontier_scan(p, s, 0, -1, root.h));
}

TEST_CASE("one move from the goal") {
    auto s = apply_move(PuzzleState::goal(), Move::Right);
    REQUIRE(s);
    const auto out = serial_idastar(FifteenPuzzle(*s), OrderPolicy{});
    CHECK(out.solution.cost == 1);
    CHECK(out.solution.path.size() == 1);
}

TEST_CASE("budget truncates a pass") {
    ArtificialSpec spec = balanced(6, 3, 1.0);
    spec.herror = 12;
    ArtificialTree t(spec);
    const auto r = cost_bounded_dfs(t, make_root(t), 100, OrderPolicy{}, 5);
    CHECK(r.truncated);
    CHECK(r.nodes_expanded == 5);
}

TEST_CASE("serial IDA* is optimal on random small trees") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        const auto spec = gen::small_spec(seed, 8, 4);
        ArtificialTree t(spec);
        const auto out = serial_idastar(t, OrderPolicy{});
        CAPTURE(seed);
        CHECK(out.solution.cost == oracle::artificial_bfs(t));
        if (spec.density == 0.0)
            CHECK(out.solution.cost == spec.d);
        // Thresholds strictly increase and the last one is the cost.
        for (std::size_t i = 1; i < out.iterations.size(); ++i)
            CHECK(out.iterations[i].threshold > out.iterations[i - 1].threshold);
        CHECK(out.iterations.back().threshold == out.solution.cost);
        CHECK(out.solution.path.size() == static_cast<std::size_t>(out.solution.cost));
    }
}

TEST_CASE("cost does not depend on the ordering policy") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto spec = gen::small_spec(seed + 1000, 7, 4);
        ArtificialTree t(spec);
        const Cost fixed = serial_idastar(t, OrderPolicy{}).solution.cost;
        std::vector<int> rev;
        for (int i = spec.b - 1; i >= 0; --i)
            rev.push_back(i);
        CAPTURE(seed);
        CHECK(serial_idastar(t, OrderPolicy::fixed(rev)).solution.cost == fixed);
        CHECK(serial_idastar(t, OrderPolicy::local()).solution.cost == fixed);
    }
}

TEST_CASE("serial IDA* is deterministic") {
    const auto s = gen::scrambled(11, 30);
    FifteenPuzzle p(s);
    CHECK(serial_idastar(p, OrderPolicy{}) == serial_idastar(p, OrderPolicy{}));
}

TEST_CASE("scrambled puzzles match A*") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto s = gen::scrambled(seed, 40);
        CAPTURE(seed);
        CHECK(serial_idastar(FifteenPuzzle(s), OrderPolicy{}).solution.cost == oracle::puzzle_astar(s));
    }
}

TEST_CASE("iterations expand non-decreasing node counts on a full tree") {
    ArtificialSpec spec = balanced(8, 3, 1.0);
    spec.herror = 16;
    ArtificialTree t(spec);
    const auto out = serial_idastar(t, OrderPolicy{});
    for (std::size_t i = 1; i + 1 < out.iterations.size(); ++i)
        CHECK(out.iterations[i].nodes_expanded >= out.iterations[i - 1].nodes_expanded);
}
