#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/search.hpp"

namespace adaptida {

/// Parameters of a synthetic search tree.
struct ArtificialSpec {
    int d = 8;               // cost of the designated (optimal) goal
    double g = 0.5;          // left-to-right position of that goal, in [0,1]
    int b = 3;               // branching factor
    double imbalance = 0.0;  // in [0,1); shortens right-hand subtrees
    double density = 0.0;    // fraction of nodes at depth >= d that are goals
    int herror = 0;          // maximum heuristic underestimate
    std::uint64_t seed = 1;

    void validate() const;  // throws DataError
    // Deepest level of the tree: d, or d + 2 when extra goals are enabled.
    int max_depth() const noexcept { return density > 0.0 ? d + 2 : d; }
    // Base-b digits of g; g = 1 maps to all b - 1.
    std::vector<int> goal_path() const;

    bool operator==(const ArtificialSpec&) const = default;
};

std::string format_spec(const ArtificialSpec& spec);
ArtificialSpec parse_spec(const std::string& text);
ArtificialSpec read_spec_file(const std::string& path);
void write_spec_file(const std::string& path, const ArtificialSpec& spec);

struct ArtificialState {
    std::uint64_t hash = 0;
    double pos = 0.0;  // left-to-right position of the node in [0,1]
    int depth = 0;
    int common = 0;    // depth of the deepest ancestor on the goal path

    bool on_goal_path() const noexcept { return common == depth; }
    bool operator==(const ArtificialState&) const = default;
};

/// Stateless tree: every attribute of a node follows from the spec and
/// the child-index path that reaches it.
class ArtificialTree {
public:
    using State = ArtificialState;

    explicit ArtificialTree(ArtificialSpec spec);

    const ArtificialSpec& spec() const noexcept { return spec_; }

    State initial() const noexcept;
    Cost heuristic(const State& s) const noexcept;
    bool is_goal(const State& s) const noexcept;
    int operator_count() const noexcept { return spec_.b; }
    void successors(const State& s, int parent_op, std::vector<Successor<State>>& out) const;

    // Distance to the designated goal through the nearest common ancestor.
    Cost tree_distance(const State& s) const noexcept;
    // Resolves a path from the root; throws DataError if it leaves the tree.
    State node_at(std::span<const int> path) const;

private:
    bool child_survives(const State& parent, int index, double child_pos) const noexcept;

    ArtificialSpec spec_;
    std::vector<int> goal_path_;
    std::vector<double> level_span_;  // level size minus one, per depth
};

}  // namespace adaptida
