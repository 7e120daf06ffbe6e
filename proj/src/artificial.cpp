#include "adaptida/artificial.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace adaptida {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kGoalSalt = 0x5bd1e9955bd1e995ULL;
constexpr std::uint64_t kErrorSalt = 0xc2b2ae3d27d4eb4fULL;

double hash_fraction(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

void ArtificialSpec::validate() const {
    if (d < 1)
        throw DataError("d must be at least 1");
    if (b < 2 || b > 64)
        throw DataError("b must be in 2..64");
    if (!(g >= 0.0 && g <= 1.0))
        throw DataError("g must be in [0,1]");
    if (!(imbalance >= 0.0 && imbalance < 1.0))
        throw DataError("imbalance must be in [0,1)");
    if (!(density >= 0.0 && density <= 1.0))
        throw DataError("density must be in [0,1]");
    if (herror < 0)
        throw DataError("herror must be nonnegative");
}

std::vector<int> ArtificialSpec::goal_path() const {
    std::vector<int> path(static_cast<std::size_t>(d), b - 1);
    if (g >= 1.0)
        return path;
    double x = g;
    for (int& digit : path) {
        x *= b;
        digit = std::min(b - 1, static_cast<int>(std::floor(x)));
        x -= digit;
    }
    return path;
}

std::string format_spec(const ArtificialSpec& spec) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "d=%d\ng=%.17g\nb=%d\nimbalance=%.17g\ndensity=%.17g\nherror=%d\nseed=%llu\n",
                  spec.d, spec.g, spec.b, spec.imbalance, spec.density, spec.herror,
                  static_cast<unsigned long long>(spec.seed));
    return buf;
}

ArtificialSpec parse_spec(const std::string& text) {
    std::map<std::string, std::string> values;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("spec line " + std::to_string(number) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        if (!values.emplace(key, line.substr(eq + 1)).second)
            throw DataError("spec key '" + key + "' given twice");
    }

    ArtificialSpec spec;
    auto take = [&](const char* key) {
        auto it = values.find(key);
        if (it == values.end())
            throw DataError(std::string("spec is missing key '") + key + "'");
        std::string v = it->second;
        values.erase(it);
        return v;
    };
    try {
        std::size_t used = 0;
        auto whole = [&](const std::string& v, auto parsed) {
            if (used != v.size())
                throw DataError("trailing characters in '" + v + "'");
            return parsed;
        };
        std::string v;
        v = take("d");
        spec.d = whole(v, std::stoi(v, &used));
        v = take("g");
        spec.g = whole(v, std::stod(v, &used));
        v = take("b");
        spec.b = whole(v, std::stoi(v, &used));
        v = take("imbalance");
        spec.imbalance = whole(v, std::stod(v, &used));
        v = take("density");
        spec.density = whole(v, std::stod(v, &used));
        v = take("herror");
        spec.herror = whole(v, std::stoi(v, &used));
        v = take("seed");
        spec.seed = whole(v, std::stoull(v, &used));
    } catch (const std::logic_error&) {
        throw DataError("spec holds a value that is not a number");
    }
    if (!values.empty())
        throw DataError("unknown spec key '" + values.begin()->first + "'");
    spec.validate();
    return spec;
}

ArtificialSpec read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_spec(text.str());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_spec_file(const std::string& path, const ArtificialSpec& spec) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path);
    out << format_spec(spec);
}

ArtificialTree::ArtificialTree(ArtificialSpec spec) : spec_(spec) {
    spec_.validate();
    goal_path_ = spec_.goal_path();
    // A node's position is its rank within its level over (level size - 1),
    // so both outermost paths sit at 0 and 1 on every level.
    double span = 0.0;
    for (int k = 0; k <= spec_.max_depth(); ++k) {
        level_span_.push_back(span);
        span = span * spec_.b + (spec_.b - 1);
    }
}

ArtificialState ArtificialTree::initial() const noexcept {
    return ArtificialState{splitmix64(spec_.seed), 0.0, 0, 0};
}

Cost ArtificialTree::tree_distance(const State& s) const noexcept {
    if (s.on_goal_path())
        return std::max(0, spec_.d - s.depth);
    return (s.depth - s.common) + (spec_.d - s.common);
}

Cost ArtificialTree::heuristic(const State& s) const noexcept {
    Cost base = tree_distance(s);
    // Extra goals can sit anywhere from depth d down, so only the remaining
    // depth to that frontier is a safe bound once they are enabled.
    if (spec_.density > 0.0)
        base = std::min<Cost>(base, std::max(0, spec_.d - s.depth));
    // Scaling one uniform draw keeps each node's error monotone in herror.
    const Cost err = std::min<Cost>(
        spec_.herror, static_cast<Cost>(hash_fraction(splitmix64(s.hash ^ kErrorSalt)) *
                                        static_cast<double>(spec_.herror + 1)));
    return std::max<Cost>(0, base - err);
}

bool ArtificialTree::is_goal(const State& s) const noexcept {
    if (s.depth == spec_.d && s.on_goal_path())
        return true;
    return spec_.density > 0.0 && s.depth >= spec_.d &&
           hash_fraction(splitmix64(s.hash ^ kGoalSalt)) < spec_.density;
}

bool ArtificialTree::child_survives(const State& parent, int index, double child_pos) const noexcept {
    if (parent.depth >= spec_.max_depth())
        return false;
    if (parent.on_goal_path() && parent.depth < spec_.d &&
        goal_path_[static_cast<std::size_t>(parent.depth)] == index)
        return true;
    const double limit = std::ceil(spec_.max_depth() * (1.0 - spec_.imbalance * child_pos) - 1e-9);
    return parent.depth < limit;
}

void ArtificialTree::successors(const State& s, int /*parent_op*/,
                                std::vector<Successor<State>>& out) const {
    if (s.depth >= spec_.max_depth())
        return;
    const auto k = static_cast<std::size_t>(s.depth);
    const double rank = s.pos * level_span_[k] * spec_.b;
    for (int i = 0; i < spec_.b; ++i) {
        const double pos = (rank + i) / level_span_[k + 1];
        if (!child_survives(s, i, pos))
            continue;
        State c;
        c.hash = splitmix64(s.hash + static_cast<std::uint64_t>(i + 1) * kGolden);
        c.pos = pos;
        c.depth = s.depth + 1;
        const bool on_path = s.on_goal_path() && s.depth < spec_.d &&
                             goal_path_[static_cast<std::size_t>(s.depth)] == i;
        c.common = on_path ? c.depth : s.common;
        out.push_back({c, i, 1});
    }
}

ArtificialState ArtificialTree::node_at(std::span<const int> path) const {
    State s = initial();
    std::vector<Successor<State>> children;
    for (const int step : path) {
        children.clear();
        successors(s, -1, children);
        auto it = std::find_if(children.begin(), children.end(),
                               [&](const Successor<State>& c) { return c.op == step; });
        if (it == children.end())
            throw DataError("path leaves the tree at depth " + std::to_string(s.depth));
        s = it->state;
    }
    return s;
}

}  // namespace adaptida
