#pragma once

// Worker actor shared by the simulated and threaded engine drivers.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "adaptida/distribute.hpp"
#include "adaptida/search.hpp"
#include "adaptida/strategy.hpp"

namespace adaptida {

struct WorkerStats {
    std::uint64_t nodes_expanded = 0;
    std::uint64_t nodes_generated = 0;
    std::uint64_t idle_ticks = 0;
    std::uint64_t messages_sent = 0;

    bool operator==(const WorkerStats&) const = default;
};

namespace detail {

inline constexpr int kNoParent = -1;
inline constexpr int kCoordinatorParent = -2;

template <class Node>
struct WorkerMsg {
    enum class Kind { Grant, Work, Request, Refuse, Ack, Abort, Stop };
    Kind kind = Kind::Stop;
    int from = -1;
    std::uint64_t pass = 0;
    Cost threshold = 0;
    std::uint64_t request = 0;  // 0 for unsolicited batches
    std::vector<Node> nodes;
    std::optional<Cost> min_exceeding_f;
    bool found = false;
};

struct CoordMsg {
    enum class Kind { PassDone, Found };
    Kind kind = Kind::PassDone;
    int cluster = 0;
    std::uint64_t pass = 0;
    std::optional<Cost> min_exceeding_f;
    bool found = false;
    Solution solution;
};

template <class Node>
struct Outbox {
    std::vector<std::pair<int, WorkerMsg<Node>>> to_workers;
    std::vector<CoordMsg> to_coordinator;
};

struct DonationTally {
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t dropped = 0;
};

/// One worker: owns an open list, expands one node per step, serves and
/// issues work requests within its cluster, and takes part in the
/// diffusing-computation termination scheme of its cluster's pass (a worker
/// stays engaged to the peer that first gave it work, acknowledging later
/// batches at once, and acknowledges its parent when it has run dry).
template <ProblemSpace P>
class WorkerCore {
public:
    using State = typename P::State;
    using Node = SearchNode<State>;
    using Msg = WorkerMsg<Node>;
    using Kind = typename Msg::Kind;

    WorkerCore(const P& problem, const StrategyConfig& config, int id, int cluster,
               std::vector<int> members, std::uint64_t seed, bool simulate_distribution_time)
        : problem_(&problem), config_(&config), id_(id), cluster_(cluster), members_(members),
          poller_(std::move(members), id, config.polling, seed),
          simulate_distribution_time_(simulate_distribution_time) {}

    int id() const noexcept { return id_; }
    bool stopped() const noexcept { return stopped_; }
    bool has_work() const noexcept { return !open_.empty() || busy_ > 0 || has_pending_; }
    const WorkerStats& stats() const noexcept { return stats_; }
    const std::map<std::uint64_t, std::uint64_t>& pass_expansions() const noexcept { return per_pass_; }
    const DonationTally& donations() const noexcept { return donations_; }

    void handle(Msg&& m, Outbox<Node>& out) {
        if (m.kind == Kind::Stop) {
            stopped_ = true;
            reset(pass_);
            return;
        }
        if (stopped_) {
            if (m.kind == Kind::Work)
                donations_.received += m.nodes.size(), donations_.dropped += m.nodes.size();
            return;
        }
        switch (m.kind) {
        case Kind::Abort:
            if (m.pass >= pass_)
                reset(m.pass + 1);
            break;
        case Kind::Grant:
            on_grant(std::move(m), out);
            break;
        case Kind::Work:
            on_work(std::move(m), out);
            break;
        case Kind::Request:
            on_request(m, out);
            break;
        case Kind::Refuse:
            if (outstanding_ == m.request)
                outstanding_.reset();
            break;
        case Kind::Ack:
            if (m.pass == pass_ && parent_ != kNoParent) {
                --deficit_;
                fold(m.min_exceeding_f);
                found_ = found_ || m.found;
            }
            break;
        case Kind::Stop:
            break;
        }
        maybe_disengage(out);
    }

    // One tick of work. Returns false when the worker had nothing to do.
    bool step(Outbox<Node>& out) {
        if (stopped_)
            return false;
        if (busy_ > 0) {
            if (--busy_ == 0)
                finish_distribution(out);
            maybe_disengage(out);
            return true;
        }
        if (has_pending_) {
            finish_distribution(out);
        }
        maybe_request(out);
        bool expanded = false;
        while (!open_.empty()) {
            Node node = std::move(open_.front());
            open_.pop_front();
            if (node.f() > threshold_) {
                fold(node.f());
                continue;
            }
            ++stats_.nodes_expanded;
            if (!pass_count_)
                pass_count_ = &per_pass_[pass_];
            ++*pass_count_;
            expanded = true;
            if (problem_->is_goal(node.state)) {
                report_goal(Solution{std::move(node.path), node.g}, out);
                break;
            }
            children_.clear();
            stats_.nodes_generated += expand_into(*problem_, node, config_->ordering, children_);
            for (auto it = children_.rbegin(); it != children_.rend(); ++it)
                open_.push_front(std::move(*it));
            break;
        }
        maybe_disengage(out);
        if (!expanded)
            ++stats_.idle_ticks;
        return expanded;
    }

private:
    void send(int to, Msg m, Outbox<Node>& out) {
        m.from = id_;
        ++stats_.messages_sent;
        out.to_workers.emplace_back(to, std::move(m));
    }

    void send_coordinator(CoordMsg m, Outbox<Node>& out) {
        m.cluster = cluster_;
        ++stats_.messages_sent;
        out.to_coordinator.push_back(std::move(m));
    }

    void fold(std::optional<Cost> f) {
        if (f && (!min_exceed_ || *f < *min_exceed_))
            min_exceed_ = f;
    }

    // Drops everything belonging to the current pass; `pass` becomes the
    // oldest pass this worker still accepts messages for.
    void reset(std::uint64_t pass) {
        donations_.dropped += open_.size();
        open_.clear();
        pass_ = pass;
        pass_count_ = nullptr;
        parent_ = kNoParent;
        deficit_ = 0;
        min_exceed_.reset();
        found_ = false;
        busy_ = 0;
        has_pending_ = false;
        pending_ = {};
    }

    void report_goal(Solution solution, Outbox<Node>& out) {
        CoordMsg m;
        m.kind = CoordMsg::Kind::Found;
        m.pass = pass_;
        m.solution = std::move(solution);
        send_coordinator(std::move(m), out);
        found_ = true;
        donations_.dropped += open_.size();
        open_.clear();
    }

    void on_grant(Msg&& m, Outbox<Node>& out) {
        if (m.pass < pass_)
            return;
        reset(m.pass);
        threshold_ = m.threshold;
        parent_ = kCoordinatorParent;
        const Node& root = m.nodes.front();
        if (config_->distribution == Distribution::KumarRao || members_.size() == 1) {
            open_.push_back(root);
            return;
        }
        pending_ = distribute_breadth_first(*problem_, root, threshold_,
                                            static_cast<int>(members_.size()), config_->ordering);
        stats_.nodes_expanded += pending_.nodes_expanded;
        stats_.nodes_generated += pending_.nodes_generated;
        per_pass_[pass_] += pending_.nodes_expanded;
        fold(pending_.min_exceeding_f);
        has_pending_ = true;
        if (simulate_distribution_time_ && pending_.nodes_expanded > 0)
            busy_ = pending_.nodes_expanded;
        else
            finish_distribution(out);
    }

    void finish_distribution(Outbox<Node>& out) {
        has_pending_ = false;
        if (pending_.solution) {
            report_goal(std::move(*pending_.solution), out);
            pending_ = {};
            return;
        }
        for (std::size_t i = 0; i < members_.size(); ++i) {
            auto& batch = pending_.roots[i];
            if (members_[i] == id_) {
                for (auto& n : batch)
                    open_.push_back(std::move(n));
                continue;
            }
            if (batch.empty())
                continue;
            Msg m;
            m.kind = Kind::Work;
            m.pass = pass_;
            m.threshold = threshold_;
            m.nodes = std::move(batch);
            donations_.sent += m.nodes.size();
            ++deficit_;
            send(members_[i], std::move(m), out);
        }
        pending_ = {};
    }

    void on_work(Msg&& m, Outbox<Node>& out) {
        donations_.received += m.nodes.size();
        if (m.request != 0 && outstanding_ == m.request)
            outstanding_.reset();
        if (m.pass < pass_) {
            donations_.dropped += m.nodes.size();
            return;
        }
        if (m.pass > pass_)
            reset(m.pass);
        threshold_ = m.threshold;
        if (parent_ == kNoParent) {
            parent_ = m.from;
        } else {
            Msg ack;
            ack.kind = Kind::Ack;
            ack.pass = pass_;
            send(m.from, std::move(ack), out);
        }
        for (auto& n : m.nodes)
            open_.push_back(std::move(n));
    }

    void on_request(const Msg& m, Outbox<Node>& out) {
        Msg reply;
        reply.request = m.request;
        reply.pass = pass_;
        reply.threshold = threshold_;
        if (busy_ == 0 && !has_pending_ && m.pass <= pass_ && !open_.empty())
            reply.nodes = donate(open_, config_->donation_fraction, config_->donate_from);
        if (reply.nodes.empty()) {
            reply.kind = Kind::Refuse;
        } else {
            reply.kind = Kind::Work;
            donations_.sent += reply.nodes.size();
            ++deficit_;
        }
        send(m.from, std::move(reply), out);
    }

    void maybe_request(Outbox<Node>& out) {
        if (!config_->load_balancing || members_.size() < 2)
            return;
        if (!anticipatory_check(open_.size(), config_->anticipation_trigger, outstanding_.has_value()))
            return;
        const auto target = poller_.next();
        if (!target)
            return;
        Msg m;
        m.kind = Kind::Request;
        m.pass = pass_;
        m.request = next_request_++;
        outstanding_ = m.request;
        send(*target, std::move(m), out);
    }

    void maybe_disengage(Outbox<Node>& out) {
        if (parent_ == kNoParent || !open_.empty() || deficit_ != 0 || busy_ > 0 || has_pending_)
            return;
        if (parent_ == kCoordinatorParent) {
            CoordMsg m;
            m.kind = CoordMsg::Kind::PassDone;
            m.pass = pass_;
            m.min_exceeding_f = min_exceed_;
            m.found = found_;
            send_coordinator(std::move(m), out);
        } else {
            Msg ack;
            ack.kind = Kind::Ack;
            ack.pass = pass_;
            ack.min_exceeding_f = min_exceed_;
            ack.found = found_;
            send(parent_, std::move(ack), out);
        }
        parent_ = kNoParent;
        min_exceed_.reset();
        found_ = false;
    }

    const P* problem_;
    const StrategyConfig* config_;
    int id_;
    int cluster_;
    std::vector<int> members_;
    Poller poller_;
    bool simulate_distribution_time_;

    std::deque<Node> open_;
    std::vector<Node> children_;
    std::uint64_t pass_ = 0;
    Cost threshold_ = 0;
    int parent_ = kNoParent;
    std::int64_t deficit_ = 0;
    std::optional<Cost> min_exceed_;
    bool found_ = false;
    std::optional<std::uint64_t> outstanding_;
    std::uint64_t next_request_ = 1;
    std::uint64_t busy_ = 0;
    bool has_pending_ = false;
    InitialAssignment<State> pending_;
    bool stopped_ = false;

    WorkerStats stats_;
    std::map<std::uint64_t, std::uint64_t> per_pass_;
    std::uint64_t* pass_count_ = nullptr;  // entry of per_pass_ for pass_
    DonationTally donations_;
};

}  // namespace detail
}  // namespace adaptida
