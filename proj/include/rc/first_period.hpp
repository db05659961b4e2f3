#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rc/core.hpp"
#include "rc/second_period.hpp"

namespace rc {

/// A point of the first-period program. Baseline points are in units of the
/// known action's expected output; general and advances points are raw.
struct ProgramPoint {
    double x = 0.0;  // expected output of the observed action
    double z = 0.0;  // its cost
    double h = 0.0;  // incentive gap over the binding known action
};

struct ProgramSolution {
    double value;
    ProgramPoint point;
};

struct SolverOptions {
    int x_grid = 801;  // outer grid over expected output before golden refinement
};

struct Linearized {
    Contract contract;
    double share;
    bool share_above_one;  // the contract pays more than output on average under a0
};

/// Linear contract giving a0 the same expected payment as w1.
Linearized linearize(const Contract& w1, const Action& a0);

/// Admissible share interval of a variant: [s0^2, 1] for the baseline, [0, 1] otherwise.
std::pair<double, double> share_interval(Variant variant, const Technology& known);

ProgramSolution overall_guarantee_baseline(double s1, const Action& a0, double beta,
                                           const SolverOptions& opts = {});
ProgramSolution overall_guarantee_general(double s1, const Technology& known, double beta,
                                          const SolverOptions& opts = {});
ProgramSolution overall_guarantee_advances(double s1, const Technology& known, double beta,
                                           const SolverOptions& opts = {});
ProgramSolution overall_guarantee(Variant variant, double s1, const Technology& known, double beta,
                                  const SolverOptions& opts = {});

struct GuaranteeCurve {
    std::vector<double> shares;
    std::vector<double> values;
    std::vector<ProgramPoint> minimizers;
};

/// U(s1) on `resolution` equally spaced shares covering the admissible interval.
GuaranteeCurve guarantee_curve(Variant variant, const Technology& known, double beta,
                               int resolution, const SolverOptions& opts = {});

struct ShareOptimum {
    double s1_star;
    double u_star;
    GuaranteeCurve curve;
    std::vector<double> grid_maximizers;  // discrete local maxima tied with the best grid value
    bool optimality_unproven;             // general variant without the marginal-cost bound
};

ShareOptimum optimal_first_share(Variant variant, const Technology& known, double beta,
                                 int resolution = 200, const SolverOptions& opts = {});

struct LbmcResult {
    bool ok;
    std::optional<std::pair<Action, Action>> violation;  // (lower mean, higher mean)
};

/// Cost increments weakly exceed expected-output increments between every
/// pair of productive known actions.
LbmcResult lbmc_check(const Technology& known);

struct SweepRow {
    double beta;
    double s1_star;
    double u_star;
};

/// Optimal shares under technological advances across discount factors.
std::vector<SweepRow> exploration_sweep(const Technology& known, const std::vector<double>& betas,
                                        int resolution = 200, const SolverOptions& opts = {});

}  // namespace rc
