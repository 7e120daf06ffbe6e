#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adaptida/common.hpp"

namespace adaptida {

struct IterationRecord {
    Cost threshold = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t nodes_generated = 0;
    bool completed = false;  // ran to the end of the threshold without budget or goal cutoff
};

// Aggregates for one child of the root, i.e. one root subtree.
struct SubtreeStats {
    int op = -1;
    std::uint64_t node_count = 0;  // expansions inside the subtree
    Cost min_leaf_f = kInfiniteCost;
    Cost min_leaf_h = kInfiniteCost;
};

struct LeafSample {
    Cost g = 0;
    Cost h = 0;
};

/// Everything recorded by a budgeted prefix of serial IDA*.
struct ShallowTrace {
    std::vector<IterationRecord> iterations;
    Cost root_h = 0;
    // Root subtrees in left-to-right (canonical operator) order, measured in
    // the iteration `subtree_iteration`: the last completed one when any
    // iteration completed, otherwise the truncated one.
    std::vector<SubtreeStats> subtrees;
    std::size_t subtree_iteration = 0;
    std::vector<LeafSample> leaves;  // leading leaves of that same iteration
    std::uint64_t total_expanded = 0;
    std::uint64_t total_generated = 0;
    std::uint64_t total_parents = 0;  // expansions that generated successors
    bool truncated = false;
    std::optional<Solution> goal_found;
};

}  // namespace adaptida
