#pragma once

#include <span>
#include <string>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/trace.hpp"

namespace adaptida {

enum class OrderKind { Fixed, Local, Toida };

/// Child-ordering policy applied at every expansion.
struct OrderPolicy {
    OrderKind kind = OrderKind::Fixed;
    // Fixed: operator indices in expansion order. Empty means identity.
    std::vector<int> permutation;
    // Toida: score per root-child operator index; lower is searched first.
    std::vector<Cost> toida_scores;

    static OrderPolicy fixed(std::vector<int> permutation = {});
    static OrderPolicy local();
    static OrderPolicy toida(std::vector<Cost> scores);

    bool is_identity() const noexcept { return kind == OrderKind::Fixed && permutation.empty(); }

    // "fixed", "fixed:3-1-2-0", "local" or "toida".
    std::string name() const;

    // Throws ConfigError when the policy cannot be applied to a space with
    // `operator_count` operators.
    void validate(int operator_count) const;

    bool operator==(const OrderPolicy&) const = default;
};

struct ChildKey {
    Cost h = 0;
    int op = 0;
};

struct OrderContext {
    int depth = 1;  // depth of the children being ordered
};

/// Returns the positions of `children` in expansion order.
std::vector<int> order_children(std::span<const ChildKey> children, const OrderPolicy& policy,
                                OrderContext context);

/// Allocation-free variant used inside the search loops; `out` is overwritten.
void order_children_into(std::span<const ChildKey> children, const OrderPolicy& policy,
                         OrderContext context, std::vector<int>& out);

/// Root-subtree scores for transformation ordering: the minimum leaf f seen
/// inside each root subtree, +infinity for subtrees the trace never entered.
std::vector<Cost> toida_scores_from_trace(const ShallowTrace& trace, int operator_count);

OrderPolicy parse_order_policy(const std::string& text);

}  // namespace adaptida
