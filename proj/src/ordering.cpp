#include "adaptida/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace adaptida {

OrderPolicy OrderPolicy::fixed(std::vector<int> permutation) {
    OrderPolicy p;
    p.kind = OrderKind::Fixed;
    p.permutation = std::move(permutation);
    return p;
}

OrderPolicy OrderPolicy::local() {
    OrderPolicy p;
    p.kind = OrderKind::Local;
    return p;
}

OrderPolicy OrderPolicy::toida(std::vector<Cost> scores) {
    OrderPolicy p;
    p.kind = OrderKind::Toida;
    p.toida_scores = std::move(scores);
    return p;
}

std::string OrderPolicy::name() const {
    switch (kind) {
    case OrderKind::Local:
        return "local";
    case OrderKind::Toida:
        return "toida";
    case OrderKind::Fixed:
        break;
    }
    if (permutation.empty())
        return "fixed";
    std::ostringstream out;
    out << "fixed:";
    for (std::size_t i = 0; i < permutation.size(); ++i)
        out << (i ? "-" : "") << permutation[i];
    return out.str();
}

void OrderPolicy::validate(int operator_count) const {
    if (kind == OrderKind::Fixed && !permutation.empty()) {
        std::vector<int> sorted = permutation;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected(static_cast<std::size_t>(operator_count));
        std::iota(expected.begin(), expected.end(), 0);
        if (sorted != expected)
            throw ConfigError("fixed ordering must be a permutation of 0.." +
                              std::to_string(operator_count - 1));
    }
    if (kind == OrderKind::Toida && toida_scores.empty())
        throw ConfigError("toida ordering selected without root-subtree scores");
}

void order_children_into(std::span<const ChildKey> children, const OrderPolicy& policy,
                         OrderContext context, std::vector<int>& out) {
    out.resize(children.size());
    std::iota(out.begin(), out.end(), 0);
    if (children.size() < 2)
        return;

    auto by_h = [&](int a, int b) {
        if (children[a].h != children[b].h)
            return children[a].h < children[b].h;
        return children[a].op < children[b].op;
    };

    switch (policy.kind) {
    case OrderKind::Fixed: {
        if (policy.permutation.empty())
            return;
        auto rank = [&](int op) {
            auto it = std::find(policy.permutation.begin(), policy.permutation.end(), op);
            return static_cast<int>(it - policy.permutation.begin());
        };
        std::sort(out.begin(), out.end(),
                  [&](int a, int b) { return rank(children[a].op) < rank(children[b].op); });
        return;
    }
    case OrderKind::Local:
        std::sort(out.begin(), out.end(), by_h);
        return;
    case OrderKind::Toida:
        if (policy.toida_scores.empty())
            throw ConfigError("toida ordering selected without root-subtree scores");
        if (context.depth != 1) {
            std::sort(out.begin(), out.end(), by_h);
            return;
        }
        auto score = [&](int op) {
            if (op < 0 || static_cast<std::size_t>(op) >= policy.toida_scores.size())
                return kInfiniteCost;
            return policy.toida_scores[static_cast<std::size_t>(op)];
        };
        std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
            const Cost sa = score(children[a].op), sb = score(children[b].op);
            if (sa != sb)
                return sa < sb;
            return children[a].op < children[b].op;
        });
        return;
    }
}

std::vector<int> order_children(std::span<const ChildKey> children, const OrderPolicy& policy,
                                OrderContext context) {
    std::vector<int> out;
    order_children_into(children, policy, context, out);
    return out;
}

std::vector<Cost> toida_scores_from_trace(const ShallowTrace& trace, int operator_count) {
    if (trace.subtrees.empty())
        throw DataError("cannot derive ordering scores from an empty trace");
    std::vector<Cost> scores(static_cast<std::size_t>(operator_count), kInfiniteCost);
    for (const SubtreeStats& s : trace.subtrees) {
        if (s.op >= 0 && s.op < operator_count)
            scores[static_cast<std::size_t>(s.op)] = s.min_leaf_f;
    }
    return scores;
}

OrderPolicy parse_order_policy(const std::string& text) {
    if (text == "local")
        return OrderPolicy::local();
    if (text == "toida")
        return OrderPolicy::toida({});
    if (text == "fixed")
        return OrderPolicy::fixed();
    if (text.rfind("fixed:", 0) == 0) {
        std::vector<int> perm;
        std::istringstream in(text.substr(6));
        std::string item;
        while (std::getline(in, item, '-')) {
            try {
                perm.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw DataError("bad fixed ordering '" + text + "'");
            }
        }
        return OrderPolicy::fixed(std::move(perm));
    }
    throw DataError("unknown ordering '" + text + "'");
}

}  // namespace adaptida
