#include "doctest.h"

#include <map>

#include "adaptida/artificial.hpp"
#include "adaptida/coordinator.hpp"
#include "adaptida/distribute.hpp"
#include "adaptida/engine.hpp"
#include "adaptida/puzzle.hpp"
#include "adaptida/strategy.hpp"
#include "generators.hpp"

using namespace adaptida;

namespace {

ArtificialSpec hard_spec(std::uint64_t seed, int d = 9, int b = 3, int e = 20) {
    ArtificialSpec s;
    s.d = d;
    s.b = b;
    s.g = Rng(seed).unit();
    s.herror = e;
    s.seed = seed;
    return s;
}

StrategyConfig cfg(Distribution dist, int clusters) {
    StrategyConfig c;
    c.distribution = dist;
    c.clusters = clusters;
    return c;
}

std::uint64_t total_expanded(const EngineReport& r) {
    std::uint64_t n = 0;
    for (const auto& w : r.workers)
        n += w.nodes_expanded;
    return n;
}

}  // namespace

TEST_CASE("cluster plans are contiguous and balanced") {
    CHECK(plan_clusters(6, 2) == std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}});
    const auto five = plan_clusters(5, 2);
    CHECK(five[0].size() == 3);
    CHECK(five[1].size() == 2);
    const auto big = plan_clusters(64, 4);
    REQUIRE(big.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(big[i].size() == 16);
        CHECK(big[i].front() == static_cast<int>(16 * i));
    }
    for (int p = 1; p <= 12; ++p)
        for (int k = 1; k <= p; ++k) {
            const auto plan = plan_clusters(p, k);
            int next = 0;
            std::size_t lo = 1000, hi = 0;
            for (const auto& block : plan) {
                lo = std::min(lo, block.size());
                hi = std::max(hi, block.size());
                for (int w : block)
                    CHECK(w == next++);
            }
            CHECK(next == p);
            CHECK(hi - lo <= 1);
        }
    CHECK_THROWS_AS(plan_clusters(3, 4), ConfigError);
    CHECK_THROWS_AS(plan_clusters(3, 0), ConfigError);
}

TEST_CASE("neighbor polling alternates right then left") {
    Poller p({0, 1, 2}, 1, Polling::Neighbor, 1);
    CHECK(p.next() == 2);
    CHECK(p.next() == 0);
    CHECK(p.next() == 2);
    Poller wrap({4, 5, 6}, 6, Polling::Neighbor, 1);
    CHECK(wrap.next() == 4);
    CHECK(wrap.next() == 5);
    CHECK_FALSE(Poller({3}, 3, Polling::Neighbor, 1).next());
    CHECK_FALSE(Poller({3}, 3, Polling::Random, 1).next());
}

TEST_CASE("random polling is uniform over peers") {
    Poller p({0, 1, 2, 3, 4, 5, 6, 7}, 3, Polling::Random, 99);
    std::map<int, int> counts;
    for (int i = 0; i < 10000; ++i)
        ++counts[*p.next()];
    CHECK(counts.count(3) == 0);
    CHECK(counts.size() == 7);
    for (const auto& [peer, n] : counts)
        CHECK(std::abs(n / 10000.0 - 1.0 / 7.0) <= 0.02);
}

TEST_CASE("donation sizes and ends") {
    std::deque<int> open{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto tail = open;
    CHECK(donate(tail, 0.3, DonateEnd::TailOfList) == std::vector<int>{7, 8, 9});
    CHECK(tail.size() == 7);
    auto head = open;
    CHECK(donate(head, 0.3, DonateEnd::HeadOfList) == std::vector<int>{0, 1, 2});
    auto none = open;
    CHECK(donate(none, 0.0, DonateEnd::TailOfList).empty());
    auto all = open;
    CHECK(donate(all, 1.0, DonateEnd::TailOfList).size() == 9);
    CHECK(all.size() == 1);
    std::deque<int> one{4};
    CHECK(donate(one, 1.0, DonateEnd::HeadOfList) == std::vector<int>{4});
    std::deque<int> one_partial{4};
    CHECK(donate(one_partial, 0.5, DonateEnd::HeadOfList).empty());
    CHECK(donation_count(0, 0.5) == 0);
    for (std::size_t n = 2; n < 40; ++n)
        for (double f : {0.05, 0.3, 0.5, 0.99, 1.0}) {
            const auto c = donation_count(n, f);
            CHECK(c >= 1);
            CHECK(c <= n - 1);
        }
}

TEST_CASE("anticipation trigger") {
    CHECK(anticipatory_check(0, 0, false));
    CHECK_FALSE(anticipatory_check(1, 0, false));
    CHECK_FALSE(anticipatory_check(6, 5, false));
    CHECK(anticipatory_check(5, 5, false));
    CHECK_FALSE(anticipatory_check(5, 5, true));
}

TEST_CASE("threshold scheduler") {
    ThresholdScheduler s(14, 2);
    s.add_candidate(16);
    s.claim(14);
    CHECK(s.grant(14, kInfiniteCost) == 16);

    ThresholdScheduler x(10, 1);
    for (Cost t : {10, 12, 14})
        x.claim(t);
    CHECK(x.mean_increment() == 2);
    CHECK(x.grant(10, kInfiniteCost) == 16);
    CHECK_FALSE(x.grant(10, 17));
}

TEST_CASE("gate holds a deep solution until shallower passes prove it") {
    CHECK(optimality_gate(41, 41) == GateDecision::Accept);
    CHECK(optimality_gate(45, 41) == GateDecision::Hold);

    Coordinator c(3, 41, 2);
    const auto start = c.start();
    REQUIRE(start.grants.size() == 3);
    CHECK(start.grants[0].threshold == 41);
    CHECK(start.grants[1].threshold == 43);
    CHECK(start.grants[2].threshold == 45);

    auto a = c.on_solution(start.grants[2].pass, Solution{{2, 2}, 45});
    CHECK_FALSE(a.accepted);
    CHECK_FALSE(c.accepted());

    a = c.on_pass_done(0, start.grants[0].pass, Cost{43}, false);
    CHECK_FALSE(a.accepted);
    CHECK(c.proven_lower_bound() == 43);

    a = c.on_solution(start.grants[1].pass, Solution{{1}, 43});
    CHECK(a.accepted);
    REQUIRE(c.best());
    CHECK(c.best()->cost == 43);

    Coordinator low(3, 41, 2);
    const auto g = low.start();
    CHECK(low.on_solution(g.grants[0].pass, Solution{{0}, 41}).accepted);
}

TEST_CASE("ties between equal-cost solutions go to the leftmost path") {
    CHECK(better_solution(Solution{{0, 2}, 5}, Solution{{1, 0}, 5}));
    CHECK(better_solution(Solution{{2, 2}, 4}, Solution{{0, 0}, 5}));
    CHECK_FALSE(better_solution(Solution{{1}, 5}, Solution{{1}, 5}));
}

TEST_CASE("termination needs idle workers, no traffic and an accepted solution") {
    CHECK(detect_termination({true, 0, 0, true}));
    CHECK_FALSE(detect_termination({true, 0, 1, true}));
    CHECK_FALSE(detect_termination({true, 1, 0, true}));
    CHECK_FALSE(detect_termination({false, 0, 0, true}));
    CHECK_FALSE(detect_termination({true, 0, 0, false}));
}

TEST_CASE("breadth-first distribution") {
    ArtificialSpec s;
    s.d = 5;
    s.b = 3;
    s.herror = 10;
    ArtificialTree t(s);
    const auto root = make_root(t);

    const auto single = distribute_breadth_first(t, root, 100, 1, OrderPolicy{});
    REQUIRE(single.roots.size() == 1);
    CHECK(single.roots[0].size() == 1);
    CHECK(single.roots[0][0].depth == 0);

    const auto four = distribute_breadth_first(t, root, 100, 4, OrderPolicy{});
    CHECK(four.nodes_expanded == 4);
    std::vector<std::size_t> sizes;
    for (const auto& r : four.roots)
        sizes.push_back(r.size());
    CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2});
    CHECK(four.roots[1][0].path == std::vector<int>{0, 1});

    const auto exact = distribute_breadth_first(t, root, 100, 3, OrderPolicy{});
    for (int i = 0; i < 3; ++i) {
        REQUIRE(exact.roots[static_cast<std::size_t>(i)].size() == 1);
        CHECK(exact.roots[static_cast<std::size_t>(i)][0].path == std::vector<int>{i});
    }

    const auto kr = distribute_kumar_rao(root, 4);
    CHECK(kr.roots[0].size() == 1);
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(kr.roots[i].empty());
}

TEST_CASE("config validation") {
    StrategyConfig c;
    CHECK_NOTHROW(validate_config(c, 4));
    c.clusters = 5;
    CHECK_THROWS_AS(validate_config(c, 4), ConfigError);
    c = cfg(Distribution::KumarRao, 1);
    c.load_balancing = false;
    CHECK_THROWS_AS(validate_config(c, 4), ConfigError);
    c = StrategyConfig{};
    c.donation_fraction = 1.5;
    CHECK_THROWS_AS(validate_config(c, 4), ConfigError);
    c = StrategyConfig{};
    CHECK(to_string(c) == "dist=BF;clusters=1;lb=on;poll=neighbor;frac=0.3;end=tail;trigger=0;order=fixed");
    CHECK(parse_config(to_string(c)) == c);
    c = cfg(Distribution::KumarRao, 3);
    c.polling = Polling::Random;
    c.donate_from = DonateEnd::HeadOfList;
    c.donation_fraction = 0.5;
    c.anticipation_trigger = 4;
    c.ordering = OrderPolicy::local();
    CHECK(parse_config(to_string(c)) == c);
    CHECK_THROWS_AS(parse_config("dist=XX"), DataError);
}

TEST_CASE("one worker reproduces serial IDA*") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ArtificialTree t(hard_spec(seed, 7, 3, 10));
        const auto serial = serial_idastar(t, OrderPolicy{});
        for (auto dist : {Distribution::BreadthFirst, Distribution::KumarRao}) {
            const auto r = run_parallel(t, cfg(dist, 1), 1, ExecutionMode::sim());
            CAPTURE(seed);
            CHECK(r.solution.cost == serial.solution.cost);
            CHECK(total_expanded(r) == serial.total_expanded);
        }
    }
}

TEST_CASE("parallel cost equals serial cost") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto spec = gen::small_spec(seed + 500, 9, 4);
        ArtificialTree t(spec);
        const Cost expected = serial_idastar(t, OrderPolicy{}).solution.cost;
        for (auto dist : {Distribution::BreadthFirst, Distribution::KumarRao})
            for (int clusters : {1, 2, 4}) {
                const auto r = run_parallel(t, cfg(dist, clusters), 4, ExecutionMode::sim(2, seed));
                CAPTURE(seed);
                CAPTURE(clusters);
                CHECK(r.solution.cost == expected);
                CHECK(r.donated_sent == r.donated_received);
                CHECK(r.speedup > 0.0);
            }
    }
}

TEST_CASE("engine terminates within ten serial runs worth of ticks") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ArtificialTree t(hard_spec(seed));
        const auto serial = serial_idastar(t, OrderPolicy{}).total_expanded;
        for (int clusters : {1, 4}) {
            StrategyConfig c = cfg(Distribution::BreadthFirst, clusters);
            c.polling = Polling::Random;
            const auto r = run_parallel(t, c, 8, ExecutionMode::sim(1, seed));
            CAPTURE(seed);
            CHECK(r.ticks <= 10 * serial);
        }
    }
}

TEST_CASE("sim reports are reproducible") {
    ArtificialTree t(hard_spec(3));
    StrategyConfig c = cfg(Distribution::KumarRao, 2);
    c.polling = Polling::Random;
    const auto a = run_parallel(t, c, 6, ExecutionMode::sim(3, 17));
    const auto b = run_parallel(t, c, 6, ExecutionMode::sim(3, 17));
    CHECK(a == b);
}

TEST_CASE("kumar-rao feeds every worker") {
    ArtificialTree t(hard_spec(4, 8, 3, 16));
    const auto r = run_parallel(t, cfg(Distribution::KumarRao, 1), 4, ExecutionMode::sim());
    for (const auto& w : r.workers)
        CHECK(w.nodes_expanded > 0);
    CHECK(r.donated_sent > 0);
    CHECK(r.donated_sent == r.donated_received);
}

TEST_CASE("window clusters hold the solution until shallower passes finish") {
    // Find a tree needing six thresholds with the goal at the far left.
    std::optional<ArtificialTree> tree;
    for (std::uint64_t seed = 1; seed < 500 && !tree; ++seed) {
        ArtificialSpec s = hard_spec(seed, 6, 3, 6);
        s.g = 0.0;
        ArtificialTree t(s);
        if (serial_idastar(t, OrderPolicy{}).iterations.size() == 6)
            tree.emplace(t);
    }
    REQUIRE(tree);
    const auto r = run_parallel(*tree, cfg(Distribution::BreadthFirst, 4), 4, ExecutionMode::sim());
    CHECK(r.solution.cost == 6);
    bool solved = false;
    for (const auto& p : r.passes) {
        if (p.end == Coordinator::PassLog::End::Solved) {
            solved = true;
            CHECK(p.threshold >= r.solution.cost);
        }
        if (p.threshold < r.solution.cost)
            CHECK(p.end == Coordinator::PassLog::End::Exhausted);
    }
    CHECK(solved);
}

TEST_CASE("granted thresholds follow the serial sequence") {
    const auto s = gen::scrambled(21, 60);
    FifteenPuzzle p(s);
    const auto serial = serial_idastar(p, OrderPolicy{});
    const auto r = run_parallel(p, cfg(Distribution::BreadthFirst, 3), 3, ExecutionMode::sim());
    CHECK(r.solution.cost == serial.solution.cost);
    REQUIRE(r.granted_thresholds.size() >= 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(r.granted_thresholds[i] == serial.iterations[std::min(i, serial.iterations.size() - 1)].threshold +
                                             (i >= serial.iterations.size() ? 2 * Cost(i + 1 - serial.iterations.size()) : 0));
    for (std::size_t i = 1; i < r.granted_thresholds.size(); ++i)
        CHECK(r.granted_thresholds[i] > r.granted_thresholds[i - 1]);
}

TEST_CASE("a goal at the left of the last subtree gives superlinear speedup") {
    ArtificialSpec s;
    s.d = 8;
    s.b = 4;
    s.g = 0.75;  // path 3,0,0,...
    s.herror = 16;
    s.seed = 5;
    ArtificialTree t(s);
    REQUIRE(s.goal_path().front() == 3);
    REQUIRE(s.goal_path()[1] == 0);
    const auto r = run_parallel(t, cfg(Distribution::BreadthFirst, 1), 4, ExecutionMode::sim());
    CHECK(r.solution.cost == 8);
    CHECK(r.speedup > 4.0);
}

TEST_CASE("real threads find the optimal cost") {
    const auto s = gen::scrambled(8, 40);
    FifteenPuzzle p(s);
    const Cost expected = serial_idastar(p, OrderPolicy{}).solution.cost;
    for (int clusters : {1, 2}) {
        const auto r = run_parallel(p, cfg(Distribution::BreadthFirst, clusters), 3, ExecutionMode::threads(3));
        CHECK(r.solution.cost == expected);
        CHECK(r.speedup > 0.0);
        CHECK(r.donated_sent == r.donated_received);
    }
    const auto kr = run_parallel(p, cfg(Distribution::KumarRao, 1), 3, ExecutionMode::threads(4));
    CHECK(kr.solution.cost == expected);
}
