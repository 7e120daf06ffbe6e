#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <queue>
#include <thread>
#include <vector>

#include "adaptida/coordinator.hpp"
#include "adaptida/engine_worker.hpp"
#include "adaptida/search.hpp"
#include "adaptida/strategy.hpp"

namespace adaptida {

struct PassSummary {
    int cluster = 0;
    Cost threshold = 0;
    std::uint64_t nodes_expanded = 0;
    Coordinator::PassLog::End end = Coordinator::PassLog::End::Running;
};

struct EngineReport {
    Solution solution;
    std::vector<WorkerStats> workers;
    // Sim: tick at which the solution was accepted. Threads: microseconds.
    std::uint64_t makespan = 0;
    double wall_seconds = 0.0;       // threads only
    double serial_seconds = 0.0;     // threads only
    std::uint64_t serial_equivalent_nodes = 0;
    double speedup = 0.0;
    std::uint64_t total_expanded = 0;
    std::uint64_t max_worker_expanded = 0;
    std::uint64_t ticks = 0;  // sim: ticks until every worker stopped and the network drained
    std::vector<PassSummary> passes;
    std::vector<Cost> granted_thresholds;  // in grant order
    std::uint64_t donated_sent = 0;
    std::uint64_t donated_received = 0;
    std::uint64_t dropped = 0;

    bool operator==(const EngineReport& o) const {
        return solution == o.solution && workers == o.workers && makespan == o.makespan &&
               serial_equivalent_nodes == o.serial_equivalent_nodes && speedup == o.speedup &&
               ticks == o.ticks && granted_thresholds == o.granted_thresholds &&
               donated_sent == o.donated_sent && donated_received == o.donated_received;
    }
};

struct RunOptions {
    // Serial expansions for the speedup; measured with serial IDA* when unset.
    std::optional<std::uint64_t> serial_nodes;
    // Sim mode aborts with EngineStall after this many ticks (0 = automatic).
    std::uint64_t tick_limit = 0;
};

/// Smallest positive f increase from the root to one of its children;
/// used to spread initial thresholds before any pass has reported.
template <ProblemSpace P>
Cost root_increment(const P& problem, const OrderPolicy& order) {
    const auto root = make_root(problem);
    std::vector<SearchNode<typename P::State>> children;
    expand_into(problem, root, order, children);
    Cost best = kInfiniteCost;
    for (const auto& c : children)
        if (c.f() > root.f())
            best = std::min(best, c.f() - root.f());
    return best == kInfiniteCost ? 1 : best;
}

namespace detail {

template <ProblemSpace P>
class EngineBase {
public:
    using Node = SearchNode<typename P::State>;
    using Worker = WorkerCore<P>;
    using Msg = WorkerMsg<Node>;

    EngineBase(const P& problem, const StrategyConfig& config, int workers, std::uint64_t seed,
               bool simulate_distribution_time)
        : problem_(problem), config_(config), root_(make_root(problem)),
          plan_(plan_clusters(workers, config.clusters)),
          coordinator_(config.clusters, root_.h, root_increment(problem, config.ordering)) {
        for (std::size_t c = 0; c < plan_.size(); ++c)
            for (const int id : plan_[c])
                workers_.emplace_back(problem, config, id, static_cast<int>(c), plan_[c],
                                      splitmix64(seed ^ (0x1234567ULL * static_cast<std::uint64_t>(id + 1))),
                                      simulate_distribution_time);
    }

protected:
    // Turns coordinator actions into worker messages.
    void translate(const Coordinator::Actions& a, std::vector<std::pair<int, Msg>>& out) {
        for (const auto& abort : a.aborts)
            for (const int id : plan_[static_cast<std::size_t>(abort.cluster)]) {
                Msg m;
                m.kind = Msg::Kind::Abort;
                m.pass = abort.pass;
                out.emplace_back(id, std::move(m));
            }
        for (const auto& g : a.grants) {
            Msg m;
            m.kind = Msg::Kind::Grant;
            m.pass = g.pass;
            m.threshold = g.threshold;
            m.nodes.push_back(root_);
            out.emplace_back(plan_[static_cast<std::size_t>(g.cluster)].front(), std::move(m));
            granted_.push_back(g.threshold);
        }
    }

    Coordinator::Actions coordinate(const CoordMsg& m) {
        if (m.kind == CoordMsg::Kind::Found)
            return coordinator_.on_solution(m.pass, m.solution);
        return coordinator_.on_pass_done(m.cluster, m.pass, m.min_exceeding_f, m.found);
    }

    EngineReport summarize(std::uint64_t serial_nodes) const {
        EngineReport r;
        r.solution = *coordinator_.best();
        r.serial_equivalent_nodes = serial_nodes;
        r.granted_thresholds = granted_;
        std::map<std::uint64_t, std::uint64_t> per_pass;
        for (const auto& w : workers_) {
            r.workers.push_back(w.stats());
            r.total_expanded += w.stats().nodes_expanded;
            r.max_worker_expanded = std::max(r.max_worker_expanded, w.stats().nodes_expanded);
            for (const auto& [pass, n] : w.pass_expansions())
                per_pass[pass] += n;
            r.donated_sent += w.donations().sent;
            r.donated_received += w.donations().received;
            r.dropped += w.donations().dropped;
        }
        for (const auto& log : coordinator_.passes())
            r.passes.push_back({log.cluster, log.threshold, per_pass[log.pass], log.end});
        return r;
    }

    const P& problem_;
    const StrategyConfig& config_;
    Node root_;
    std::vector<std::vector<int>> plan_;
    Coordinator coordinator_;
    std::vector<Worker> workers_;
    std::vector<Cost> granted_;
};

template <ProblemSpace P>
class SimEngine : public EngineBase<P> {
    using Base = EngineBase<P>;
    using typename Base::Msg;
    using typename Base::Node;

public:
    SimEngine(const P& problem, const StrategyConfig& config, int workers, std::uint64_t seed,
              int latency)
        : Base(problem, config, workers, seed, true), latency_(static_cast<std::uint64_t>(latency)),
          inbox_(static_cast<std::size_t>(workers)) {}

    EngineReport run(std::uint64_t serial_nodes, std::uint64_t tick_limit) {
        std::vector<std::pair<int, Msg>> sends;
        this->translate(this->coordinator_.start(), sends);
        post_all(sends, 0, kFromCoordinator);

        std::uint64_t makespan = 0;
        bool stop_sent = false;
        Outbox<Node> out;
        for (std::uint64_t tick = 0;; ++tick) {
            if (tick > tick_limit)
                throw EngineStall("simulation exceeded " + std::to_string(tick_limit) + " ticks");
            while (!coord_inbox_.empty() && coord_inbox_.top().at <= tick) {
                CoordMsg m = coord_inbox_.top().msg;
                coord_inbox_.pop();
                sends.clear();
                this->translate(this->coordinate(m), sends);
                post_all(sends, tick, kFromCoordinator);
            }
            if (this->coordinator_.accepted() && !stop_sent) {
                makespan = tick;
                stop_sent = true;
                sends.clear();
                for (std::size_t id = 0; id < this->workers_.size(); ++id) {
                    Msg m;
                    m.kind = Msg::Kind::Stop;
                    sends.emplace_back(static_cast<int>(id), std::move(m));
                }
                post_all(sends, tick, kFromCoordinator);
            }
            for (std::size_t id = 0; id < this->workers_.size(); ++id) {
                auto& w = this->workers_[id];
                auto& box = inbox_[id];
                out.to_workers.clear();
                out.to_coordinator.clear();
                while (!box.empty() && box.top().at <= tick) {
                    Msg m = std::move(const_cast<Timed<Msg>&>(box.top()).msg);
                    box.pop();
                    w.handle(std::move(m), out);
                }
                w.step(out);
                post_all(out.to_workers, tick, static_cast<int>(id));
                for (auto& cm : out.to_coordinator)
                    coord_inbox_.push({tick + delay(static_cast<int>(id), kToCoordinator), seq_++, std::move(cm)});
            }
            if (stop_sent && drained()) {
                EngineReport r = this->summarize(serial_nodes);
                r.makespan = makespan;
                r.ticks = tick + 1;
                r.speedup = makespan == 0 ? static_cast<double>(serial_nodes)
                                          : static_cast<double>(serial_nodes) / static_cast<double>(makespan);
                return r;
            }
        }
    }

private:
    static constexpr int kFromCoordinator = -1;
    static constexpr int kToCoordinator = -1;

    template <class T>
    struct Timed {
        std::uint64_t at;
        std::uint64_t seq;
        T msg;
        bool operator>(const Timed& o) const { return at != o.at ? at > o.at : seq > o.seq; }
    };
    template <class T>
    using Queue = std::priority_queue<Timed<T>, std::vector<Timed<T>>, std::greater<>>;

    // The coordinator lives on worker 0, so traffic between them is free.
    std::uint64_t delay(int from, int to) const {
        const bool local = (from == kFromCoordinator && to == 0) || (from == 0 && to == kToCoordinator);
        return local ? 0 : latency_;
    }

    void post_all(std::vector<std::pair<int, Msg>>& sends, std::uint64_t tick, int from) {
        for (auto& [to, m] : sends)
            inbox_[static_cast<std::size_t>(to)].push({tick + delay(from, to), seq_++, std::move(m)});
        sends.clear();
    }

    bool drained() const {
        if (!coord_inbox_.empty())
            return false;
        for (const auto& box : inbox_)
            if (!box.empty())
                return false;
        for (const auto& w : this->workers_)
            if (!w.stopped())
                return false;
        return true;
    }

    std::uint64_t latency_;
    std::uint64_t seq_ = 0;
    std::vector<Queue<Msg>> inbox_;
    Queue<CoordMsg> coord_inbox_;
};

}  // namespace detail
}  // namespace adaptida

#include "adaptida/engine_threads.hpp"

namespace adaptida {

/// Runs the configured parallel IDA* and returns the accepted solution with
/// full accounting. Sim mode is deterministic for a fixed seed.
template <ProblemSpace P>
EngineReport run_parallel(const P& problem, const StrategyConfig& config, int workers,
                          const ExecutionMode& mode, const RunOptions& options = {}) {
    validate_config(config, workers);
    config.ordering.validate(problem.operator_count());
    if (mode.kind == ExecutionMode::Kind::DeterministicSim) {
        if (mode.message_latency_ticks < 0)
            throw ConfigError("message latency must be nonnegative");
        const std::uint64_t serial = options.serial_nodes
                                         ? *options.serial_nodes
                                         : serial_idastar(problem, config.ordering).total_expanded;
        const std::uint64_t limit =
            options.tick_limit ? options.tick_limit
                               : 50 * serial + 20000 + 1000 * static_cast<std::uint64_t>(mode.message_latency_ticks);
        detail::SimEngine<P> engine(problem, config, workers, mode.seed, mode.message_latency_ticks);
        return engine.run(serial, limit);
    }
    return detail::run_threads(problem, config, workers, mode.seed, options);
}

}  // namespace adaptida
