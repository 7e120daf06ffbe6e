#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "adaptida/common.hpp"

namespace adaptida {

/// Hands out unique cost thresholds to clusters. Candidates are the
/// min-exceeding f values reported by finished passes; when none is free,
/// the next threshold is extrapolated from the mean granted increment.
class ThresholdScheduler {
public:
    // `root_h` is the first candidate; `fallback_increment` is used while
    // fewer than two thresholds have been granted.
    ThresholdScheduler(Cost root_h, Cost fallback_increment);

    void add_candidate(Cost threshold);
    void claim(Cost threshold);  // marks a threshold as granted

    // Smallest unclaimed candidate in [floor, ceiling), else an extrapolated
    // threshold if it is below `ceiling`. The result is claimed.
    std::optional<Cost> grant(Cost floor, Cost ceiling);

    const std::set<Cost>& candidates() const noexcept { return candidates_; }
    const std::set<Cost>& claimed() const noexcept { return claimed_; }
    Cost mean_increment() const;

private:
    std::set<Cost> candidates_;
    std::set<Cost> claimed_;
    Cost fallback_;
};

enum class GateDecision { Accept, Hold };

/// A found solution is final once no cheaper one can exist: its cost is at
/// most the lower bound proven by finished goal-free passes.
inline GateDecision optimality_gate(Cost solution_cost, Cost proven_lower_bound) noexcept {
    return solution_cost <= proven_lower_bound ? GateDecision::Accept : GateDecision::Hold;
}

/// Prefer lower cost, then the lexicographically smaller operator path.
bool better_solution(const Solution& a, const Solution& b) noexcept;

struct TerminationView {
    bool all_workers_idle = false;
    std::uint64_t messages_in_flight = 0;
    std::int64_t outstanding_batches = 0;  // donated batches not yet acknowledged
    bool solution_accepted = false;
};

inline bool detect_termination(const TerminationView& v) noexcept {
    return v.all_workers_idle && v.messages_in_flight == 0 && v.outstanding_batches == 0 &&
           v.solution_accepted;
}

/// Threshold scheduling, solution gating and pass bookkeeping for all
/// clusters. Transport-agnostic: callers deliver events and carry out the
/// returned actions.
class Coordinator {
public:
    struct Grant {
        int cluster = 0;
        std::uint64_t pass = 0;
        Cost threshold = 0;
    };
    struct Abort {
        int cluster = 0;
        std::uint64_t pass = 0;
    };
    struct Actions {
        std::vector<Abort> aborts;
        std::vector<Grant> grants;
        bool accepted = false;  // became true during this event
    };
    struct PassLog {
        int cluster = 0;
        std::uint64_t pass = 0;
        Cost threshold = 0;
        enum class End { Running, Exhausted, Solved, Aborted } end = End::Running;
        std::optional<Cost> min_exceeding_f;
    };

    Coordinator(int clusters, Cost root_h, Cost fallback_increment);

    Actions start();
    // `found_goal` marks a pass cut short by a goal; its bound proves nothing.
    Actions on_pass_done(int cluster, std::uint64_t pass, std::optional<Cost> min_exceeding_f,
                         bool found_goal);
    Actions on_solution(std::uint64_t pass, const Solution& solution);

    bool accepted() const noexcept { return accepted_; }
    const std::optional<Solution>& best() const noexcept { return best_; }
    Cost proven_lower_bound() const noexcept { return proven_; }
    std::optional<Cost> cluster_threshold(int cluster) const;
    std::optional<std::uint64_t> cluster_pass(int cluster) const;
    bool any_running() const noexcept;
    const std::vector<PassLog>& passes() const noexcept { return log_; }
    const ThresholdScheduler& scheduler() const noexcept { return scheduler_; }

private:
    struct ClusterState {
        std::optional<std::uint64_t> pass;
        Cost threshold = 0;
        std::size_t log_index = 0;
    };

    void regrant_idle(Actions& actions);
    void check_acceptance(Actions& actions);
    PassLog* find_log(std::uint64_t pass);

    std::vector<ClusterState> clusters_;
    ThresholdScheduler scheduler_;
    std::optional<Solution> best_;
    Cost proven_;
    bool accepted_ = false;
    std::uint64_t next_pass_ = 1;
    std::vector<PassLog> log_;
};

}  // namespace adaptida
