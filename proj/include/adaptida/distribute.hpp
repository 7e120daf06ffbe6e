#pragma once

#include <optional>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/ordering.hpp"
#include "adaptida/search.hpp"

namespace adaptida {

template <class State>
struct InitialAssignment {
    // Per worker, the subtree roots it starts with, leftmost first.
    std::vector<std::vector<SearchNode<State>>> roots;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t nodes_generated = 0;
    std::optional<Cost> min_exceeding_f;
    std::optional<Solution> solution;  // goal met while expanding the top levels
};

/// Appends the children of `node` to `out` in expansion order.
template <ProblemSpace P>
std::size_t expand_into(const P& problem, const SearchNode<typename P::State>& node,
                        const OrderPolicy& order, std::vector<SearchNode<typename P::State>>& out) {
    // Scratch space reused across calls; expansions dominate engine time.
    thread_local std::vector<Successor<typename P::State>> succs;
    thread_local std::vector<ChildKey> keys;
    thread_local std::vector<int> order_out;
    succs.clear();
    keys.clear();
    problem.successors(node.state, node.path.empty() ? -1 : node.path.back(), succs);
    for (const auto& s : succs)
        keys.push_back(ChildKey{problem.heuristic(s.state), s.op});
    order_children_into(keys, order, OrderContext{node.depth + 1}, order_out);
    for (const int idx : order_out) {
        const auto i = static_cast<std::size_t>(idx);
        SearchNode<typename P::State> child;
        child.state = succs[i].state;
        child.g = node.g + succs[i].cost;
        child.h = keys[i].h;
        child.depth = node.depth + 1;
        child.path.reserve(node.path.size() + 1);
        child.path.assign(node.path.begin(), node.path.end());
        child.path.push_back(succs[i].op);
        out.push_back(std::move(child));
    }
    return succs.size();
}

/// Expands whole levels breadth-first under `threshold` until the next
/// level holds at least `k` nodes, then deals that level out round-robin.
/// Workers beyond the frontier size get nothing.
template <ProblemSpace P>
InitialAssignment<typename P::State> distribute_breadth_first(const P& problem,
                                                              const SearchNode<typename P::State>& root,
                                                              Cost threshold, int k,
                                                              const OrderPolicy& order) {
    using Node = SearchNode<typename P::State>;
    InitialAssignment<typename P::State> out;
    out.roots.resize(static_cast<std::size_t>(std::max(k, 1)));
    std::vector<Node> level{root};
    while (level.size() < out.roots.size()) {
        std::vector<Node> next;
        for (const Node& node : level) {
            if (node.f() > threshold) {
                if (!out.min_exceeding_f || node.f() < *out.min_exceeding_f)
                    out.min_exceeding_f = node.f();
                continue;
            }
            ++out.nodes_expanded;
            if (problem.is_goal(node.state)) {
                out.solution = Solution{node.path, node.g};
                return out;
            }
            out.nodes_generated += expand_into(problem, node, order, next);
        }
        level = std::move(next);
        if (level.empty())
            break;
    }
    for (std::size_t i = 0; i < level.size(); ++i)
        out.roots[i % out.roots.size()].push_back(std::move(level[i]));
    return out;
}

/// Worker 0 starts with the root; the rest start idle and ask for work.
template <class State>
InitialAssignment<State> distribute_kumar_rao(const SearchNode<State>& root, int k) {
    InitialAssignment<State> out;
    out.roots.resize(static_cast<std::size_t>(std::max(k, 1)));
    out.roots[0].push_back(root);
    return out;
}

}  // namespace adaptida
