#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/ordering.hpp"

namespace adaptida {

enum class Distribution { KumarRao, BreadthFirst };
enum class Polling { Neighbor, Random };
enum class DonateEnd { HeadOfList, TailOfList };

/// One point in the strategy space searched by the parallel engine.
struct StrategyConfig {
    Distribution distribution = Distribution::BreadthFirst;
    int clusters = 1;
    bool load_balancing = true;
    Polling polling = Polling::Neighbor;
    double donation_fraction = 0.3;
    DonateEnd donate_from = DonateEnd::TailOfList;
    int anticipation_trigger = 0;
    OrderPolicy ordering;

    bool operator==(const StrategyConfig& o) const;
};

// Throws ConfigError.
void validate_config(const StrategyConfig& config, int workers);

/// "dist=BF;clusters=1;lb=on;poll=neighbor;frac=0.3;end=tail;trigger=0;order=fixed"
std::string to_string(const StrategyConfig& config);
StrategyConfig parse_config(const std::string& text);

std::string to_string(Distribution d);
std::string to_string(Polling p);
std::string to_string(DonateEnd e);

struct ExecutionMode {
    enum class Kind { DeterministicSim, RealThreads };
    Kind kind = Kind::DeterministicSim;
    int message_latency_ticks = 1;
    std::uint64_t seed = 1;  // drives Random polling

    static ExecutionMode sim(int latency = 1, std::uint64_t seed = 1) {
        return {Kind::DeterministicSim, latency, seed};
    }
    static ExecutionMode threads(std::uint64_t seed = 1) { return {Kind::RealThreads, 0, seed}; }
};

/// Contiguous worker blocks whose sizes differ by at most one; the larger
/// blocks come first.
std::vector<std::vector<int>> plan_clusters(int workers, int clusters);

/// Per-worker polling cursor.
class Poller {
public:
    Poller(std::vector<int> members, int self, Polling policy, std::uint64_t seed);

    // Next worker to ask for work, or nullopt when the worker has no peers.
    std::optional<int> next();

private:
    std::vector<int> members_;
    std::size_t self_index_ = 0;
    Polling policy_;
    Rng rng_;
    bool right_next_ = true;
};

/// Number of nodes handed over from a list of `size` nodes.
std::size_t donation_count(std::size_t size, double fraction) noexcept;

/// Splits `open` (head at front): the donated nodes are removed from the
/// chosen end and returned in list order. Empty result means refusal.
template <class T>
std::vector<T> donate(std::deque<T>& open, double fraction, DonateEnd end) {
    const std::size_t n = donation_count(open.size(), fraction);
    std::vector<T> out;
    out.reserve(n);
    if (end == DonateEnd::HeadOfList) {
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(std::move(open.front()));
            open.pop_front();
        }
    } else {
        for (std::size_t i = open.size() - n; i < open.size(); ++i)
            out.push_back(std::move(open[i]));
        open.erase(open.end() - static_cast<std::ptrdiff_t>(n), open.end());
    }
    return out;
}

inline bool anticipatory_check(std::size_t open_size, int trigger, bool request_outstanding) noexcept {
    return !request_outstanding && open_size <= static_cast<std::size_t>(std::max(trigger, 0));
}

}  // namespace adaptida
