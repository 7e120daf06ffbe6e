#include "adaptida/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace adaptida {
namespace {

// Nodes on levels 1..j of a uniform tree.
long double levels(int b, int j) {
    const long double bb = b;
    return bb * (std::pow(bb, static_cast<long double>(j)) - 1.0L) / (bb - 1.0L);
}

std::string g6(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

int ModelParams::distribution_depth() const {
    if (x >= 0)
        return x;
    int depth = 0;
    long double reach = 1.0L;
    while (reach < P) {
        reach *= b;
        ++depth;
    }
    return depth;
}

void ModelParams::validate() const {
    if (P < 1)
        throw DomainError("P must be at least 1");
    if (b < 2)
        throw DomainError("b must be at least 2");
    if (d < 1)
        throw DomainError("d must be at least 1");
    const int xd = distribution_depth();
    if (xd < 0 || xd >= d)
        throw DomainError("distribution depth must be in [0, d)");
    if (std::pow(static_cast<long double>(b), xd) < P)
        throw DomainError("b^x must be at least P");
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw DomainError("imbalance ratio must be in (0,1]");
}

long double dts_speedup_eq1(int P, int b, int d, int x) {
    ModelParams p;
    p.P = P;
    p.b = b;
    p.d = d;
    p.x = x;
    p.validate();
    const long double bb = b;
    // sum_{1..d} b^i / sum_{x+1..d} b^i, rearranged to stay finite for large d.
    const long double ratio = (1.0L - std::pow(bb, -static_cast<long double>(d))) /
                              (1.0L - std::pow(bb, static_cast<long double>(x - d)));
    return P * ratio + 1.0L / (2.0L * std::pow(bb, static_cast<long double>(x)));
}

double pws_speedup_eq2(double a, int b) {
    if (!(a > 0.0) || a > 1.0)
        throw DomainError("goal position a must be in (0,1]");
    if (b < 2)
        throw DomainError("b must be at least 2");
    return 1.0 + 1.0 / (a * (b - 1));
}

std::vector<double> processor_shares(const ModelParams& params) {
    std::vector<double> shares(static_cast<std::size_t>(params.P), 1.0 / params.P);
    if (params.balance == Balance::ExponentialImbalance) {
        double total = 0.0, w = 1.0;
        for (auto& s : shares) {
            s = w;
            total += w;
            w *= params.ratio;
        }
        for (auto& s : shares)
            s /= total;
    }
    return shares;
}

double simulate_ideal_dts(const ModelParams& params, double goal_pos) {
    params.validate();
    if (!(goal_pos >= 0.0 && goal_pos <= 1.0))
        throw DomainError("goal position must be in [0,1]");
    const int x = params.distribution_depth();
    const auto shares = processor_shares(params);
    double max_share = 0.0;
    for (const double s : shares)
        max_share = std::max(max_share, s);

    const long double nx = levels(params.b, x);
    long double serial = 0.0L, parallel = 0.0L;
    for (int j = 1; j < params.d; ++j) {
        const long double nj = levels(params.b, j);
        serial += nj;
        parallel += j <= x ? nj : nx + max_share * (nj - nx);
    }

    // Goal iteration: the owner of the goal's interval stops at the goal and
    // everyone else stops with it.
    const long double below = levels(params.b, params.d) - nx;
    double start = 0.0;
    std::size_t owner = 0;
    for (; owner + 1 < shares.size(); ++owner) {
        // Tolerance keeps goals placed exactly on a boundary with the right-hand owner.
        if (goal_pos < start + shares[owner] - 1e-12)
            break;
        start += shares[owner];
    }
    serial += nx + goal_pos * below;
    parallel += nx + std::max(0.0, goal_pos - start) * below;
    return static_cast<double>(serial / parallel);
}

double pws_crossover(const ModelParams& params, double step) {
    const auto n = static_cast<long>(std::llround(1.0 / step));
    double crossover = 0.0;
    for (long k = n; k >= 0; --k) {
        const double gp = static_cast<double>(k) / static_cast<double>(n);
        const double pws = gp > 0.0 ? pws_speedup_eq2(gp, params.b) : std::numeric_limits<double>::infinity();
        if (pws >= simulate_ideal_dts(params, gp))
            return crossover;
        crossover = gp;
    }
    return 0.0;
}

std::vector<double> linear_grid(double from, double to, double step) {
    std::vector<double> out;
    if (!(step > 0.0) || to < from)
        return out;
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        out.push_back(from + static_cast<double>(i) * step);
    return out;
}

std::string curve_table(const CurveSweep& sweep) {
    const ModelParams& p = sweep.params;
    std::string out;
    if (sweep.model == "eq1") {
        out = "P,b,d,x,speedup\n";
        for (const int d : sweep.depths) {
            const int x = p.distribution_depth();
            out += std::to_string(p.P) + "," + std::to_string(p.b) + "," + std::to_string(d) + "," +
                   std::to_string(x) + "," + g6(static_cast<double>(dts_speedup_eq1(p.P, p.b, d, x))) + "\n";
        }
    } else if (sweep.model == "eq2") {
        out = "a,b,speedup\n";
        for (const int b : sweep.branching)
            for (const double a : sweep.positions)
                out += g6(a) + "," + std::to_string(b) + "," + g6(pws_speedup_eq2(a, b)) + "\n";
    } else if (sweep.model == "dts") {
        out = "P,b,d,x,balance,goal_pos,speedup,superlinear\n";
        const std::string bal = p.balance == Balance::Balanced ? "balanced" : "exponential";
        for (const double gp : sweep.positions) {
            const double s = simulate_ideal_dts(p, gp);
            out += std::to_string(p.P) + "," + std::to_string(p.b) + "," + std::to_string(p.d) + "," +
                   std::to_string(p.distribution_depth()) + "," + bal + "," + g6(gp) + "," + g6(s) + "," +
                   (s > p.P ? "1" : "0") + "\n";
        }
    } else if (sweep.model == "fig6") {
        out = "P,b,d,x,goal_pos,dts,pws,pws_better\n";
        for (const double gp : sweep.positions) {
            const double dts = simulate_ideal_dts(p, gp);
            const double pws = gp > 0.0 ? pws_speedup_eq2(gp, p.b) : std::numeric_limits<double>::infinity();
            out += std::to_string(p.P) + "," + std::to_string(p.b) + "," + std::to_string(p.d) + "," +
                   std::to_string(p.distribution_depth()) + "," + g6(gp) + "," + g6(dts) + "," + g6(pws) + "," +
                   (pws > dts ? "1" : "0") + "\n";
        }
    } else {
        throw DataError("unknown curve model '" + sweep.model + "' (eq1, eq2, dts, fig6)");
    }
    return out;
}

}  // namespace adaptida
