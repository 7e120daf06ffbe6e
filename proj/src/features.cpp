#include "adaptida/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace adaptida {

const std::array<const char*, ProblemFeatures::kCount>& ProblemFeatures::names() {
    static const std::array<const char*, kCount> n{"b", "herror", "imb", "loc", "hbf"};
    return n;
}

ProblemFeatures extract_features(const ShallowTrace& trace) {
    if (trace.total_expanded == 0)
        throw DataError("cannot extract features from a trace without expansions");
    ProblemFeatures f;

    f.b = trace.total_parents > 0
              ? static_cast<double>(trace.total_generated) / static_cast<double>(trace.total_parents)
              : 1.0;

    Cost min_f = kInfiniteCost;
    for (const auto& s : trace.subtrees)
        min_f = std::min(min_f, s.min_leaf_f);
    for (const auto& l : trace.leaves)
        min_f = std::min(min_f, l.g + l.h);
    f.herror = min_f == kInfiniteCost ? 0.0 : static_cast<double>(std::max<Cost>(0, min_f - trace.root_h));

    const std::size_t k = trace.subtrees.size();
    if (k >= 2) {
        double mean = 0.0;
        for (const auto& s : trace.subtrees)
            mean += static_cast<double>(s.node_count);
        mean /= static_cast<double>(k);
        if (mean > 0.0) {
            double var = 0.0;
            for (const auto& s : trace.subtrees) {
                const double d = static_cast<double>(s.node_count) - mean;
                var += d * d;
            }
            var /= static_cast<double>(k);
            f.imb = std::clamp(std::sqrt(var) / mean / std::sqrt(static_cast<double>(k - 1)), 0.0, 1.0);
        }
    }

    if (k > 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < k; ++i)
            if (trace.subtrees[i].min_leaf_h < trace.subtrees[best].min_leaf_h)
                best = i;
        f.loc = (static_cast<double>(best) + 0.5) / static_cast<double>(k);
    }

    double log_sum = 0.0;
    int pairs = 0;
    for (std::size_t j = 1; j < trace.iterations.size(); ++j) {
        const auto& prev = trace.iterations[j - 1];
        const auto& cur = trace.iterations[j];
        if (!prev.completed || !cur.completed || prev.nodes_expanded == 0)
            continue;
        log_sum += std::log(static_cast<double>(cur.nodes_expanded) / static_cast<double>(prev.nodes_expanded));
        ++pairs;
    }
    f.hbf = pairs > 0 ? std::exp(log_sum / pairs) : f.b;
    return f;
}

namespace {

double population_sd(const std::vector<double>& xs) {
    double mean = 0.0;
    for (const double x : xs)
        mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (const double x : xs)
        var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

FeatureStability stability_report(const std::vector<std::vector<ProblemFeatures>>& samples) {
    if (samples.size() < 2)
        throw DataError("stability report needs at least two problems");
    for (const auto& levels : samples)
        if (levels.size() < 2)
            throw DataError("stability report needs at least two levels per problem");

    FeatureStability out;
    for (std::size_t feat = 0; feat < ProblemFeatures::kCount; ++feat) {
        std::vector<double> means;
        double within = 0.0;
        for (const auto& levels : samples) {
            std::vector<double> xs;
            for (const auto& f : levels)
                xs.push_back(f.values()[feat]);
            within += population_sd(xs);
            double m = 0.0;
            for (const double x : xs)
                m += x;
            means.push_back(m / static_cast<double>(xs.size()));
        }
        out.within[feat] = within / static_cast<double>(samples.size());
        out.between[feat] = population_sd(means);
    }
    return out;
}

std::string features_csv_header() { return "b,herror,imb,loc,hbf"; }

std::string to_csv(const ProblemFeatures& f) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", f.b, f.herror, f.imb, f.loc, f.hbf);
    return buf;
}

ProblemFeatures parse_features_csv(const std::string& row) {
    std::array<double, ProblemFeatures::kCount> v{};
    std::istringstream in(row);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(in, cell, ',')) {
        if (i >= v.size())
            throw DataError("feature row has more than 5 columns");
        try {
            std::size_t used = 0;
            v[i] = std::stod(cell, &used);
            if (used != cell.size())
                throw DataError("bad feature value '" + cell + "'");
        } catch (const std::logic_error&) {
            throw DataError("bad feature value '" + cell + "'");
        }
        ++i;
    }
    if (i != v.size())
        throw DataError("feature row needs 5 columns");
    return ProblemFeatures::from_values(v);
}

}  // namespace adaptida
