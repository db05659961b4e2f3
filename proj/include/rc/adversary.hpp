#pragma once

#include <cstdint>
#include <vector>

#include "rc/core.hpp"
#include "rc/second_period.hpp"

namespace rc {

/// Candidate deviation actions: every (lambda*base + (1-lambda)*delta_0, cost)
/// over the grids, plus the exact constructions when requested.
struct DeviationFamily {
    std::vector<Distribution> bases;
    std::vector<double> lambda_grid;
    std::vector<double> cost_grid;
    bool include_constructed = true;
    bool enforce_cap = true;  // off: the second agent's technology is unrestricted

    void validate() const;

    /// Known distributions and the observed one, lambda_points mixture
    /// weights, and cost_points costs over [0, 1.5 * max known cost].
    static DeviationFamily standard(const Technology& known, const Action& a1, int lambda_points = 101,
                                    int cost_points = 101);

    /// For searching first-period observations: known distributions plus a
    /// point mass at every positive output level.
    static DeviationFamily observations(const Technology& known, int lambda_points = 101,
                                        int cost_points = 101);
};

struct EmpiricalV2 {
    double min_payoff;
    Technology worst;
};

/// Minimum principal payoff from w2 over technologies known + {a1, d}, d
/// ranging over the family (and d absent).
EmpiricalV2 empirical_v2(const Contract& w2, const Contract& w1, const Action& a1,
                         const Technology& known, const DeviationFamily& family);

struct EmpiricalOverall {
    double min_interim;
    Action worst_observation;
    double first_period;  // principal's first-period payoff at the worst observation
    double v2_star;
};

/// Minimum interim guarantee of w1 over observations the first agent could
/// rationally make. The cost of each candidate distribution is minimized
/// exactly over its feasible range.
EmpiricalOverall empirical_overall(const Contract& w1, const Technology& known, double beta,
                                   Variant variant, const DeviationFamily& family);

/// The report's contract earns exactly v2_star on the witness, and the
/// witness is consistent with the observation (containment only under
/// technological advances).
bool verify_tightness(const SecondPeriodReport& report, const Contract& w1, const Action& a1,
                      const Technology& known);

/// Reproducible tabulated contracts with w(0) = 0 and 0 <= w(y) <= y that are
/// not linear on the grid.
std::vector<Contract> sample_nonlinear_contracts(const OutputGrid& grid, int count, std::uint64_t seed);

}  // namespace rc
