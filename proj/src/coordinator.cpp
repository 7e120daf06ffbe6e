#include "adaptida/coordinator.hpp"

#include <algorithm>

namespace adaptida {

ThresholdScheduler::ThresholdScheduler(Cost root_h, Cost fallback_increment)
    : fallback_(std::max<Cost>(1, fallback_increment)) {
    candidates_.insert(root_h);
}

void ThresholdScheduler::add_candidate(Cost threshold) { candidates_.insert(threshold); }

void ThresholdScheduler::claim(Cost threshold) { claimed_.insert(threshold); }

Cost ThresholdScheduler::mean_increment() const {
    if (claimed_.size() < 2)
        return fallback_;
    const Cost span = *claimed_.rbegin() - *claimed_.begin();
    const auto gaps = static_cast<Cost>(claimed_.size() - 1);
    return std::max<Cost>(1, (span + gaps - 1) / gaps);
}

std::optional<Cost> ThresholdScheduler::grant(Cost floor, Cost ceiling) {
    for (auto it = candidates_.lower_bound(floor); it != candidates_.end() && *it < ceiling; ++it) {
        if (!claimed_.count(*it)) {
            claimed_.insert(*it);
            return *it;
        }
    }
    Cost t = claimed_.empty() ? floor : std::max(floor, *claimed_.rbegin() + mean_increment());
    while (claimed_.count(t))
        ++t;
    if (t >= ceiling)
        return std::nullopt;
    claimed_.insert(t);
    return t;
}

bool better_solution(const Solution& a, const Solution& b) noexcept {
    if (a.cost != b.cost)
        return a.cost < b.cost;
    return a.path < b.path;
}

Coordinator::Coordinator(int clusters, Cost root_h, Cost fallback_increment)
    : clusters_(static_cast<std::size_t>(clusters)), scheduler_(root_h, fallback_increment),
      proven_(root_h) {}

Coordinator::Actions Coordinator::start() {
    Actions actions;
    regrant_idle(actions);
    return actions;
}

Coordinator::PassLog* Coordinator::find_log(std::uint64_t pass) {
    for (auto& entry : log_)
        if (entry.pass == pass)
            return &entry;
    return nullptr;
}

std::optional<Cost> Coordinator::cluster_threshold(int cluster) const {
    const auto& c = clusters_.at(static_cast<std::size_t>(cluster));
    if (!c.pass)
        return std::nullopt;
    return c.threshold;
}

std::optional<std::uint64_t> Coordinator::cluster_pass(int cluster) const {
    return clusters_.at(static_cast<std::size_t>(cluster)).pass;
}

bool Coordinator::any_running() const noexcept {
    return std::any_of(clusters_.begin(), clusters_.end(),
                       [](const ClusterState& c) { return c.pass.has_value(); });
}

Coordinator::Actions Coordinator::on_pass_done(int cluster, std::uint64_t pass,
                                               std::optional<Cost> min_exceeding_f,
                                               bool found_goal) {
    Actions actions;
    auto& c = clusters_.at(static_cast<std::size_t>(cluster));
    if (accepted_ || c.pass != pass)
        return actions;  // stale report from an aborted pass
    c.pass.reset();
    PassLog& entry = log_[c.log_index];
    entry.min_exceeding_f = min_exceeding_f;
    entry.end = found_goal ? PassLog::End::Solved : PassLog::End::Exhausted;
    if (!found_goal) {
        if (min_exceeding_f) {
            scheduler_.add_candidate(*min_exceeding_f);
            proven_ = std::max(proven_, *min_exceeding_f);
        } else {
            proven_ = kInfiniteCost;  // the whole space fits under the threshold
        }
    }
    check_acceptance(actions);
    if (accepted_)
        return actions;
    if (proven_ == kInfiniteCost && !best_)
        throw SpaceExhausted();
    regrant_idle(actions);
    if (!any_running())
        throw EngineStall("no threshold left to search but no solution accepted");
    return actions;
}

Coordinator::Actions Coordinator::on_solution(std::uint64_t pass, const Solution& solution) {
    Actions actions;
    if (accepted_)
        return actions;
    if (!best_ || better_solution(solution, *best_))
        best_ = solution;
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        auto& c = clusters_[i];
        if (!c.pass || c.threshold < best_->cost)
            continue;
        log_[c.log_index].end = *c.pass == pass ? PassLog::End::Solved : PassLog::End::Aborted;
        actions.aborts.push_back({static_cast<int>(i), *c.pass});
        c.pass.reset();
    }
    check_acceptance(actions);
    if (!accepted_) {
        regrant_idle(actions);
        if (!any_running())
            throw EngineStall("solution held but no pass can prove it");
    }
    return actions;
}

void Coordinator::check_acceptance(Actions& actions) {
    if (accepted_ || !best_ || optimality_gate(best_->cost, proven_) != GateDecision::Accept)
        return;
    accepted_ = true;
    actions.accepted = true;
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        auto& c = clusters_[i];
        if (!c.pass)
            continue;
        log_[c.log_index].end = PassLog::End::Aborted;
        actions.aborts.push_back({static_cast<int>(i), *c.pass});
        c.pass.reset();
    }
}

void Coordinator::regrant_idle(Actions& actions) {
    const Cost ceiling = best_ ? best_->cost : kInfiniteCost;
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        auto& c = clusters_[i];
        if (c.pass)
            continue;
        const auto t = scheduler_.grant(proven_, ceiling);
        if (!t)
            continue;
        c.pass = next_pass_++;
        c.threshold = *t;
        c.log_index = log_.size();
        log_.push_back({static_cast<int>(i), *c.pass, *t, PassLog::End::Running, std::nullopt});
        actions.grants.push_back({static_cast<int>(i), *c.pass, *t});
    }
}

}  // namespace adaptida
