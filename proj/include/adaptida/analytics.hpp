#pragma once

#include <string>
#include <vector>

#include "adaptida/common.hpp"

namespace adaptida {

enum class Balance { Balanced, ExponentialImbalance };

/// Idealized uniform tree searched by P processors.
struct ModelParams {
    int P = 10;
    int b = 6;       // branching factor, also the heuristic branching factor
    int d = 10;      // goal depth
    int x = -1;      // distribution depth; -1 picks the smallest x with b^x >= P
    Balance balance = Balance::Balanced;
    double ratio = 0.5;  // ExponentialImbalance: share of processor i is proportional to ratio^i

    int distribution_depth() const;
    void validate() const;  // throws DomainError
};

/// Distributed tree search speedup for a goal at the far right of the tree,
/// with a charge of 2b^x for the initial distribution.
long double dts_speedup_eq1(int P, int b, int d, int x);

/// Parallel window search speedup for a goal at left-to-right position a.
double pws_speedup_eq2(double a, int b);

/// Per-processor shares of the leaf interval, left to right, summing to 1.
std::vector<double> processor_shares(const ModelParams& params);

/// Node-count speedup of distributed tree search on a full tree with unit
/// threshold increments, goal at left-to-right position `goal_pos` of the
/// last iteration.
double simulate_ideal_dts(const ModelParams& params, double goal_pos);

/// Smallest grid position from which the simulated tree search beats
/// window search everywhere to the right.
double pws_crossover(const ModelParams& params, double step = 0.001);

struct CurveSweep {
    std::string model = "fig6";         // eq1 | eq2 | dts | fig6
    ModelParams params;
    std::vector<int> depths;            // eq1
    std::vector<double> positions;      // eq2 (a), dts and fig6 (goal_pos)
    std::vector<int> branching;         // eq2
};

/// CSV with a header row and one row per grid point, 6 significant digits.
std::string curve_table(const CurveSweep& sweep);

/// Evenly spaced grid from `from` to `to` inclusive.
std::vector<double> linear_grid(double from, double to, double step);

}  // namespace adaptida
