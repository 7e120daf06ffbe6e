#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/ordering.hpp"

namespace adaptida {

template <class State>
struct Successor {
    State state;
    int op = 0;
    Cost cost = 1;
};

/// A search domain: initial state, ordered successors, admissible heuristic
/// and goal test. `successors` appends children in canonical operator order
/// and may omit the child that undoes `parent_op` (-1 at the root).
template <class P>
concept ProblemSpace = requires(const P& p, const typename P::State& s,
                                std::vector<Successor<typename P::State>>& out) {
    typename P::State;
    { p.initial() } -> std::convertible_to<typename P::State>;
    { p.heuristic(s) } -> std::convertible_to<Cost>;
    { p.is_goal(s) } -> std::convertible_to<bool>;
    { p.operator_count() } -> std::convertible_to<int>;
    p.successors(s, int{}, out);
};

template <class State>
struct SearchNode {
    State state;
    Cost g = 0;
    Cost h = 0;
    int depth = 0;
    std::vector<int> path;

    Cost f() const noexcept { return g + h; }
};

template <ProblemSpace P>
SearchNode<typename P::State> make_root(const P& problem) {
    SearchNode<typename P::State> root;
    root.state = problem.initial();
    root.h = problem.heuristic(root.state);
    return root;
}

struct PassResult {
    std::optional<Solution> solution;
    std::optional<Cost> min_exceeding_f;  // smallest f strictly above the threshold
    std::uint64_t nodes_expanded = 0;
    std::uint64_t nodes_generated = 0;
    bool truncated = false;  // stopped by the node budget
};

struct IterationLog {
    Cost threshold = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t nodes_generated = 0;
};

struct SearchOutcome {
    Solution solution;
    std::vector<IterationLog> iterations;
    std::uint64_t total_expanded = 0;
    std::uint64_t total_generated = 0;

    bool operator==(const SearchOutcome& o) const {
        return solution == o.solution && total_expanded == o.total_expanded &&
               total_generated == o.total_generated &&
               std::equal(iterations.begin(), iterations.end(), o.iterations.begin(),
                          o.iterations.end(), [](const IterationLog& a, const IterationLog& b) {
                              return a.threshold == b.threshold &&
                                     a.nodes_expanded == b.nodes_expanded &&
                                     a.nodes_generated == b.nodes_generated;
                          });
    }
};

/// Hooks for callers that need more than the pass summary. `root_op` is the
/// operator of the depth-1 ancestor (-1 for the root itself).
struct NullObserver {
    void on_expand(int /*depth*/, int /*root_op*/, Cost /*g*/, Cost /*h*/, std::size_t /*children*/) {}
    void on_leaf(int /*depth*/, int /*root_op*/, Cost /*g*/, Cost /*h*/) {}
    void on_goal(int /*depth*/, int /*root_op*/, Cost /*g*/, Cost /*h*/) {}
};

namespace detail {

template <ProblemSpace P, class Observer>
class BoundedDfs {
public:
    using State = typename P::State;

    BoundedDfs(const P& problem, Cost threshold, const OrderPolicy& order,
               std::optional<std::uint64_t> budget, Observer& observer)
        : problem_(problem), threshold_(threshold), order_(order), budget_(budget),
          observer_(observer) {}

    PassResult run(const SearchNode<State>& root) {
        path_ = root.path;
        root_depth_ = root.depth;
        const int parent_op = path_.empty() ? -1 : path_.back();
        const int root_op = path_.empty() ? -1 : path_.front();
        visit(root.state, root.g, root.h, root.depth, parent_op, root_op);
        return std::move(result_);
    }

private:
    struct Child {
        Successor<State> succ;
        Cost h;
    };

    // Returns true when the pass must stop (goal found or budget exhausted).
    bool visit(const State& state, Cost g, Cost h, int depth, int parent_op, int root_op) {
        const Cost f = g + h;
        if (f > threshold_) {
            if (!result_.min_exceeding_f || f < *result_.min_exceeding_f)
                result_.min_exceeding_f = f;
            observer_.on_leaf(depth, root_op, g, h);
            return false;
        }
        if (budget_ && result_.nodes_expanded >= *budget_) {
            result_.truncated = true;
            return true;
        }
        ++result_.nodes_expanded;
        if (problem_.is_goal(state)) {
            observer_.on_goal(depth, root_op, g, h);
            result_.solution = Solution{path_, g};
            return true;
        }

        const auto level = static_cast<std::size_t>(depth - root_depth_);
        if (scratch_.size() <= level) {
            scratch_.resize(level + 1);
            keys_.resize(level + 1);
            perm_.resize(level + 1);
        }
        auto& succs = raw_;
        succs.clear();
        problem_.successors(state, parent_op, succs);
        auto& children = scratch_[level];
        children.clear();
        for (auto& s : succs) {
            const Cost ch = problem_.heuristic(s.state);
            children.push_back(Child{std::move(s), ch});
        }
        result_.nodes_generated += children.size();
        observer_.on_expand(depth, root_op, g, h, children.size());

        auto& keys = keys_[level];
        keys.clear();
        for (const Child& c : children)
            keys.push_back(ChildKey{c.h, c.succ.op});
        auto& perm = perm_[level];
        order_children_into(keys, order_, OrderContext{depth + 1}, perm);

        for (const int idx : perm) {
            const Child& c = scratch_[level][static_cast<std::size_t>(idx)];
            path_.push_back(c.succ.op);
            const bool stop = visit(c.succ.state, g + c.succ.cost, c.h, depth + 1, c.succ.op,
                                    root_op < 0 ? c.succ.op : root_op);
            if (stop)
                return true;
            path_.pop_back();
        }
        return false;
    }

    const P& problem_;
    Cost threshold_;
    const OrderPolicy& order_;
    std::optional<std::uint64_t> budget_;
    Observer& observer_;
    PassResult result_;
    std::vector<int> path_;
    int root_depth_ = 0;
    std::vector<Successor<State>> raw_;
    // Per-depth buffers; deque growth keeps references to shallower levels valid.
    std::deque<std::vector<Child>> scratch_;
    std::deque<std::vector<ChildKey>> keys_;
    std::deque<std::vector<int>> perm_;
};

}  // namespace detail

/// One depth-first pass bounded by `threshold`. Nodes with f above the
/// threshold are pruned and folded into min_exceeding_f; the pass stops at
/// the first goal, or when `budget` expansions have been made.
template <ProblemSpace P, class Observer = NullObserver>
PassResult cost_bounded_dfs(const P& problem, const SearchNode<typename P::State>& root,
                            Cost threshold, const OrderPolicy& order,
                            std::optional<std::uint64_t> budget = std::nullopt) {
    Observer observer;
    return detail::BoundedDfs<P, Observer>(problem, threshold, order, budget, observer).run(root);
}

template <ProblemSpace P, class Observer>
PassResult cost_bounded_dfs(const P& problem, const SearchNode<typename P::State>& root,
                            Cost threshold, const OrderPolicy& order,
                            std::optional<std::uint64_t> budget, Observer& observer) {
    return detail::BoundedDfs<P, Observer>(problem, threshold, order, budget, observer).run(root);
}

/// Threshold for the next iteration after an unsuccessful pass.
inline Cost next_threshold(const PassResult& prev) {
    if (!prev.min_exceeding_f)
        throw SpaceExhausted();
    return *prev.min_exceeding_f;
}

template <ProblemSpace P>
SearchOutcome serial_idastar(const P& problem, const OrderPolicy& order) {
    order.validate(problem.operator_count());
    const auto root = make_root(problem);
    SearchOutcome outcome;
    Cost threshold = root.h;
    for (;;) {
        PassResult pass = cost_bounded_dfs(problem, root, threshold, order);
        outcome.iterations.push_back({threshold, pass.nodes_expanded, pass.nodes_generated});
        outcome.total_expanded += pass.nodes_expanded;
        outcome.total_generated += pass.nodes_generated;
        if (pass.solution) {
            outcome.solution = std::move(*pass.solution);
            return outcome;
        }
        threshold = next_threshold(pass);
    }
}

}  // namespace adaptida
