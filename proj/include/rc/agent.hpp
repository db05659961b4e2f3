#pragma once

#include <cstddef>
#include <vector>

#include "rc/core.hpp"

namespace rc {

struct BestResponse {
    double agent_value;
    double principal_value;  // principal payoff from `chosen`
    std::size_t chosen_index;
    Action chosen;
    std::vector<std::size_t> argmax_set;  // indices into the technology
};

/// Derivative of the agent's utility along the action's tilt (0 without one).
double agent_utility_slope(const Contract& w, const Action& a);

/// Utility-maximizing action. Near-ties (kTieTol) are ranked by tilt slope,
/// remaining ties go to the action that pays the principal most; the first
/// index wins exact ties. No null action is added.
BestResponse best_response(const Contract& w, const Technology& tech, double tie_tol = kTieTol);

/// (E_F1[w1] - c1) - (E_Fa[w1] - c_a).
double incentive_gap(const Contract& w1, const Action& a1, const Action& a);

/// A holds every known action and a1, and nothing in A beats a1 under w1.
bool is_compatible(const Technology& tech, const Contract& w1, const Action& a1,
                   const Technology& known, double tie_tol = kTieTol);

/// Utility cap only; used when the containment requirement is checked elsewhere.
bool respects_cap(const Action& a, const Contract& w1, const Action& a1, double tie_tol = kTieTol);

double interim_guarantee(const Contract& w1, const Action& a1, double v2_star, double beta);

}  // namespace rc
