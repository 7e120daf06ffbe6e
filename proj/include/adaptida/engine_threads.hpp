#pragma once

// Real-thread driver: one OS thread per worker, mutex-guarded mailboxes,
// coordinator called synchronously under its own lock.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace adaptida::detail {

template <ProblemSpace P>
class ThreadEngine : public EngineBase<P> {
    using Base = EngineBase<P>;
    using typename Base::Msg;
    using typename Base::Node;
    using Clock = std::chrono::steady_clock;

public:
    ThreadEngine(const P& problem, const StrategyConfig& config, int workers, std::uint64_t seed)
        : Base(problem, config, workers, seed, false) {
        for (int i = 0; i < workers; ++i)
            boxes_.push_back(std::make_unique<Mailbox>());
    }

    EngineReport run() {
        start_ = Clock::now();
        {
            std::lock_guard lock(coord_mu_);
            std::vector<std::pair<int, Msg>> sends;
            this->translate(this->coordinator_.start(), sends);
            for (auto& [to, m] : sends)
                deliver(to, std::move(m));
        }
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < this->workers_.size(); ++i)
            threads.emplace_back([this, i] { loop(i); });
        for (auto& t : threads)
            t.join();
        if (error_)
            std::rethrow_exception(error_);
        EngineReport r = this->summarize(0);
        r.wall_seconds = std::chrono::duration<double>(accepted_at_ - start_).count();
        r.makespan = static_cast<std::uint64_t>(r.wall_seconds * 1e6);
        return r;
    }

private:
    struct Mailbox {
        std::mutex mu;
        std::condition_variable cv;
        std::vector<Msg> queue;
    };

    void deliver(int to, Msg m) {
        auto& box = *boxes_[static_cast<std::size_t>(to)];
        {
            std::lock_guard lock(box.mu);
            box.queue.push_back(std::move(m));
        }
        box.cv.notify_one();
    }

    // Caller holds coord_mu_.
    void broadcast_stop() {
        if (stopping_)
            return;
        stopping_ = true;
        for (std::size_t i = 0; i < boxes_.size(); ++i) {
            Msg m;
            m.kind = Msg::Kind::Stop;
            deliver(static_cast<int>(i), std::move(m));
        }
    }

    void to_coordinator(const CoordMsg& m) {
        std::lock_guard lock(coord_mu_);
        if (stopping_)
            return;
        std::vector<std::pair<int, Msg>> sends;
        try {
            this->translate(this->coordinate(m), sends);
        } catch (...) {
            error_ = std::current_exception();
            broadcast_stop();
            return;
        }
        if (this->coordinator_.accepted()) {
            accepted_at_ = Clock::now();
            broadcast_stop();
            return;
        }
        for (auto& [to, msg] : sends)
            deliver(to, std::move(msg));
    }

    void loop(std::size_t id) {
        auto& worker = this->workers_[id];
        auto& box = *boxes_[id];
        Outbox<Node> out;
        std::vector<Msg> local;
        try {
            for (;;) {
                {
                    std::unique_lock lock(box.mu);
                    if (!worker.has_work() && box.queue.empty())
                        box.cv.wait_for(lock, std::chrono::milliseconds(20),
                                        [&] { return !box.queue.empty(); });
                    local.swap(box.queue);
                }
                for (auto& m : local)
                    worker.handle(std::move(m), out);
                local.clear();
                if (worker.stopped())
                    return;
                if (!worker.step(out) && !worker.has_work())
                    std::this_thread::sleep_for(std::chrono::microseconds(20));
                for (auto& [to, m] : out.to_workers)
                    deliver(to, std::move(m));
                for (auto& cm : out.to_coordinator)
                    to_coordinator(cm);
                out.to_workers.clear();
                out.to_coordinator.clear();
            }
        } catch (...) {
            std::lock_guard lock(coord_mu_);
            if (!error_)
                error_ = std::current_exception();
            broadcast_stop();
        }
    }

    std::vector<std::unique_ptr<Mailbox>> boxes_;
    std::mutex coord_mu_;
    bool stopping_ = false;
    std::exception_ptr error_;
    Clock::time_point start_;
    Clock::time_point accepted_at_;
};

template <ProblemSpace P>
EngineReport run_threads(const P& problem, const StrategyConfig& config, int workers,
                         std::uint64_t seed, const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto serial = serial_idastar(problem, config.ordering);
    const double serial_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ThreadEngine<P> engine(problem, config, workers, seed);
    EngineReport r = engine.run();
    r.serial_equivalent_nodes = options.serial_nodes.value_or(serial.total_expanded);
    r.serial_seconds = serial_seconds;
    r.speedup = r.wall_seconds > 0 ? serial_seconds / r.wall_seconds : 0.0;
    if (r.speedup <= 0.0)
        r.speedup = 1e-9;
    return r;
}

}  // namespace adaptida::detail
