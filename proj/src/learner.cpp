#include "adaptida/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

namespace adaptida {
namespace {

bool parse_number(const std::string& s, double& out) {
    if (s.empty())
        return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

const std::map<std::string, std::vector<std::string>>& named_orders() {
    static const std::map<std::string, std::vector<std::string>> orders{
        {"distribution", {"KR", "BF"}},
        {"load_balancing", {"on", "off"}},
        {"polling", {"neighbor", "random"}},
        {"donate_from", {"head", "tail"}},
        {"ordering", {"fixed", "local", "toida"}},
    };
    return orders;
}

}  // namespace

bool is_known_axis(const std::string& axis) {
    const auto& axes = strategy_axes();
    return axis == "all" || std::find(axes.begin(), axes.end(), axis) != axes.end();
}

std::string default_value(const std::string& axis) {
    static const std::map<std::string, std::string> defaults{
        {"distribution", "BF"}, {"clusters", "1"},    {"load_balancing", "on"},
        {"polling", "neighbor"}, {"fraction", "0.3"}, {"donate_from", "tail"},
        {"trigger", "0"},        {"ordering", "fixed"},
        {"all", "dist=BF;clusters=1;lb=on;poll=neighbor;frac=0.3;end=tail;trigger=0;order=fixed"},
    };
    auto it = defaults.find(axis);
    return it == defaults.end() ? std::string() : it->second;
}

std::vector<std::string> canonical_order(const std::string& axis, std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
        double v;
        return parse_number(s, v);
    });
    if (numeric) {
        std::stable_sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
            double x, y;
            parse_number(a, x);
            parse_number(b, y);
            return x < y;
        });
        return labels;
    }
    auto it = named_orders().find(axis);
    if (it == named_orders().end())
        return labels;
    const auto& order = it->second;
    auto rank = [&](const std::string& s) {
        auto pos = std::find(order.begin(), order.end(), s);
        return static_cast<std::size_t>(pos - order.begin());
    };
    std::stable_sort(labels.begin(), labels.end(),
                     [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
    return labels;
}

std::vector<std::string> Dataset::labels() const {
    std::vector<std::string> all;
    for (const auto& c : cases) {
        all.push_back(c.label);
        for (const auto& [k, v] : c.timings)
            all.push_back(k);
    }
    return canonical_order(axis, std::move(all));
}

TrainingCase label_cases(const std::map<std::string, double>& timings, const ProblemFeatures& features,
                         const std::string& axis, const std::string& architecture) {
    if (timings.empty())
        throw DataError("cannot label a case without timings");
    double best = timings.begin()->second;
    for (const auto& [k, v] : timings)
        best = std::min(best, v);
    std::vector<std::string> tied;
    for (const auto& [k, v] : timings)
        if (v == best)
            tied.push_back(k);
    const std::string def = default_value(axis);
    std::string label;
    if (std::find(tied.begin(), tied.end(), def) != tied.end())
        label = def;
    else
        label = canonical_order(axis, tied).front();
    return TrainingCase{features, architecture, axis, label, timings};
}

double coefficient_of_variation(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw DataError("coefficient of variation needs at least two samples");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (!(mean > 0.0))
        throw DataError("coefficient of variation needs a positive mean");
    double ss = 0.0;
    for (const double x : samples)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0)) / mean;
}

Dataset variance_filter(const Dataset& data) {
    if (data.cases.size() < 3)
        throw DataError("variance filter needs at least three cases");
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < data.cases.size(); ++i) {
        std::vector<double> t;
        for (const auto& [k, v] : data.cases[i].timings)
            t.push_back(v);
        double cov = 0.0;
        if (t.size() >= 2) {
            try {
                cov = coefficient_of_variation(t);
            } catch (const DataError&) {
                cov = 0.0;
            }
        }
        ranked.emplace_back(cov, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t n = data.cases.size();
    const std::size_t kept = (n + 2) / 3;
    const std::size_t dup = (kept + 2) / 3;
    Dataset out{data.axis, {}};
    for (std::size_t i = 0; i < kept; ++i)
        out.cases.push_back(data.cases[ranked[i].second]);
    for (std::size_t i = 0; i < dup; ++i)
        out.cases.push_back(data.cases[ranked[i].second]);
    return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw DataError("paired t test needs two equal-length samples of size >= 2");
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = a[i] - b[i];
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; }))
        throw DataError("paired t test is undefined when every difference is zero");
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (const double x : d)
        ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    TTest out;
    if (sd == 0.0) {
        out.t = mean > 0 ? INFINITY : -INFINITY;
        out.p = 0.0;
        return out;
    }
    out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    boost::math::students_t dist(static_cast<double>(n - 1));
    out.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.t))));
    return out;
}

}  // namespace adaptida
