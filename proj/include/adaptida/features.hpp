#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/search.hpp"
#include "adaptida/trace.hpp"

namespace adaptida {

/// The five measurements used to pick a strategy.
struct ProblemFeatures {
    double b = 1.0;       // average branching factor
    double herror = 0.0;  // lookahead-revealed heuristic underestimate
    double imb = 0.0;     // imbalance of root subtrees, in [0,1]
    double loc = 0.5;     // left-to-right position of the most promising subtree, in [0,1]
    double hbf = 1.0;     // growth of expansions between iterations

    static constexpr std::size_t kCount = 5;
    static const std::array<const char*, kCount>& names();
    std::array<double, kCount> values() const { return {b, herror, imb, loc, hbf}; }
    static ProblemFeatures from_values(const std::array<double, kCount>& v) {
        return {v[0], v[1], v[2], v[3], v[4]};
    }

    bool operator==(const ProblemFeatures&) const = default;
};

inline constexpr std::uint64_t kDefaultShallowBudget = 200000;
inline constexpr std::size_t kMaxLeafSamples = 4096;

namespace detail {

// Collects per-root-subtree statistics for one pass.
struct TraceObserver {
    std::vector<SubtreeStats>* subtrees = nullptr;  // indexed by root op
    std::vector<LeafSample>* leaves = nullptr;
    std::uint64_t parents = 0;

    void leaf(int root_op, Cost g, Cost h) {
        if (leaves->size() < kMaxLeafSamples)
            leaves->push_back({g, h});
        if (root_op < 0)
            return;
        auto& s = (*subtrees)[static_cast<std::size_t>(root_op)];
        s.min_leaf_f = std::min(s.min_leaf_f, g + h);
        s.min_leaf_h = std::min(s.min_leaf_h, h);
    }
    void on_expand(int, int root_op, Cost g, Cost h, std::size_t children) {
        if (root_op >= 0)
            ++(*subtrees)[static_cast<std::size_t>(root_op)].node_count;
        if (children > 0)
            ++parents;
        else
            leaf(root_op, g, h);
    }
    void on_leaf(int, int root_op, Cost g, Cost h) { leaf(root_op, g, h); }
    void on_goal(int, int root_op, Cost g, Cost h) {
        if (root_op >= 0)
            ++(*subtrees)[static_cast<std::size_t>(root_op)].node_count;
        leaf(root_op, g, h);
    }
};

}  // namespace detail

/// Budgeted prefix of serial IDA*: iterations run until `budget` expansions
/// have been made in total (the iteration in progress is cut off) or a goal
/// is found.
template <ProblemSpace P>
ShallowTrace shallow_search(const P& problem, std::uint64_t budget = kDefaultShallowBudget,
                            const OrderPolicy& order = {}) {
    if (budget < 1)
        throw DataError("shallow search budget must be at least 1");
    const auto root = make_root(problem);
    ShallowTrace trace;
    trace.root_h = root.h;

    std::vector<Successor<typename P::State>> root_children;
    problem.successors(root.state, -1, root_children);
    std::vector<int> root_ops;
    for (const auto& c : root_children)
        root_ops.push_back(c.op);

    std::vector<SubtreeStats> kept;
    std::vector<LeafSample> kept_leaves;
    bool have_completed = false;
    Cost threshold = root.h;
    for (;;) {
        std::vector<SubtreeStats> by_op(static_cast<std::size_t>(problem.operator_count()));
        std::vector<LeafSample> leaves;
        detail::TraceObserver obs{&by_op, &leaves};
        const std::uint64_t remaining = budget - trace.total_expanded;
        PassResult pass = cost_bounded_dfs(problem, root, threshold, order, remaining, obs);

        trace.total_expanded += pass.nodes_expanded;
        trace.total_generated += pass.nodes_generated;
        trace.total_parents += obs.parents;
        const bool completed = !pass.truncated && !pass.solution;
        trace.iterations.push_back({threshold, pass.nodes_expanded, pass.nodes_generated, completed});

        if (completed || !have_completed) {
            kept.clear();
            for (const int op : root_ops) {
                SubtreeStats s = by_op[static_cast<std::size_t>(op)];
                s.op = op;
                kept.push_back(s);
            }
            kept_leaves = std::move(leaves);
            trace.subtree_iteration = trace.iterations.size() - 1;
            have_completed = have_completed || completed;
        }
        if (pass.solution) {
            trace.goal_found = std::move(pass.solution);
            break;
        }
        if (pass.truncated || trace.total_expanded >= budget) {
            trace.truncated = true;
            break;
        }
        if (!pass.min_exceeding_f)
            break;  // space exhausted; nothing more to learn
        threshold = *pass.min_exceeding_f;
    }
    trace.subtrees = std::move(kept);
    trace.leaves = std::move(kept_leaves);
    return trace;
}

/// Throws DataError on a trace without expansions.
ProblemFeatures extract_features(const ShallowTrace& trace);

struct FeatureStability {
    std::array<double, ProblemFeatures::kCount> within{};
    std::array<double, ProblemFeatures::kCount> between{};
};

/// `samples[p][l]` holds the features of problem p measured at level l.
FeatureStability stability_report(const std::vector<std::vector<ProblemFeatures>>& samples);

std::string features_csv_header();  // "b,herror,imb,loc,hbf"
std::string to_csv(const ProblemFeatures& f);
ProblemFeatures parse_features_csv(const std::string& row);

}  // namespace adaptida
