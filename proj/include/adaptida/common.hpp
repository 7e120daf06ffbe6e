#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaptida {

// Path costs are nonnegative integers; both bundled domains are unit-cost.
using Cost = std::int64_t;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input data (files, flags, datasets).
class DataError : public Error {
public:
    using Error::Error;
};

/// The cost-bounded search ran out of nodes without reaching a goal.
class SpaceExhausted : public Error {
public:
    SpaceExhausted() : Error("search space exhausted without reaching a goal") {}
};

/// A strategy configuration that cannot be executed.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The simulated engine stopped making progress. Always an engine bug.
class EngineStall : public Error {
public:
    using Error::Error;
};

/// Arguments outside the domain of an analytic model.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operator-index path from the root and its total cost.
struct Solution {
    std::vector<int> path;
    Cost cost = 0;

    bool operator==(const Solution&) const = default;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Small portable generator. std::uniform_int_distribution differs between
// standard libraries, so every seeded draw in the project goes through here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64(state_ - 0x9e3779b97f4a7c15ULL);
    }

    // Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

    // Uniform double in [0, 1).
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace adaptida
