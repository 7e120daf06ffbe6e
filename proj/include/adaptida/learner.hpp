#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adaptida/features.hpp"

namespace adaptida {

/// Strategy parameters a model can be trained for. "all" labels whole
/// configurations by their compact string.
inline const std::vector<std::string>& strategy_axes() {
    static const std::vector<std::string> axes{"distribution", "clusters", "load_balancing", "polling",
                                               "fraction",     "donate_from", "trigger",     "ordering"};
    return axes;
}
bool is_known_axis(const std::string& axis);

/// Value an axis takes in the baseline configuration; ties go to it.
std::string default_value(const std::string& axis);

/// Labels sorted into the axis's canonical order: numeric ascending when
/// every label is a number, a fixed order for named axes, else lexicographic.
std::vector<std::string> canonical_order(const std::string& axis, std::vector<std::string> labels);

struct TrainingCase {
    ProblemFeatures features;
    std::string architecture;  // e.g. "sim-P16"
    std::string axis;
    std::string label;
    std::map<std::string, double> timings;

    bool operator==(const TrainingCase&) const = default;
};

struct Dataset {
    std::string axis;
    std::vector<TrainingCase> cases;

    // Every label or timing key seen, in canonical order.
    std::vector<std::string> labels() const;
};

/// Picks the fastest strategy; ties go to the default, then canonical order.
TrainingCase label_cases(const std::map<std::string, double>& timings, const ProblemFeatures& features,
                         const std::string& axis, const std::string& architecture);

/// Sample standard deviation over mean. Throws DataError for fewer than two
/// samples or a non-positive mean.
double coefficient_of_variation(const std::vector<double>& samples);

/// Keeps the most decisive third of the cases (largest timing CoV first,
/// stable) and repeats the top third of those.
Dataset variance_filter(const Dataset& data);

class DecisionTree {
public:
    struct Node {
        enum class Kind { Leaf, Numeric, Architecture } kind = Kind::Leaf;
        // Numeric: feature index and threshold, value <= threshold goes left.
        // Architecture: equal to `architecture` goes left.
        int feature = 0;
        double threshold = 0.0;
        std::string architecture;
        int left = -1;
        int right = -1;
        std::string label;  // leaves
        double cases = 0.0;
        double errors = 0.0;

        bool operator==(const Node&) const = default;
    };

    DecisionTree() = default;
    explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& root() const { return nodes_.at(0); }
    bool empty() const noexcept { return nodes_.empty(); }
    std::size_t leaf_count() const;
    int depth() const;

    const std::string& classify(const ProblemFeatures& features, const std::string& architecture) const;

    std::string serialize() const;
    static DecisionTree parse(const std::string& text);

    bool operator==(const DecisionTree&) const = default;

private:
    std::vector<Node> nodes_;
};

DecisionTree induce_tree(const Dataset& data, int min_cases = 2);

inline const std::string& classify(const DecisionTree& tree, const ProblemFeatures& f,
                                   const std::string& architecture) {
    return tree.classify(f, architecture);
}

struct CrossValidation {
    std::vector<std::string> methods;               // "tree", "majority", then one per fixed label
    std::vector<std::vector<double>> fold_errors;   // [method][fold]
    std::vector<double> mean_error;                 // per method
};

CrossValidation cross_validate(const Dataset& data, int folds, std::uint64_t seed, int min_cases = 2);

struct TTest {
    double t = 0.0;
    double p = 1.0;  // two-sided
};

/// Paired t test on per-fold differences a - b.
TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace adaptida
