#include "rc/agent.hpp"

#include <limits>
#include <stdexcept>

namespace rc {

double agent_utility_slope(const Contract& w, const Action& a) {
    if (!a.tilt()) return 0.0;
    const auto pay = w.payments(a.grid());
    const auto& t = *a.tilt();
    double s = 0.0;
    for (std::size_t i = 0; i < pay.size(); ++i) s += t.weights[i] * pay[i];
    return s - t.cost;
}

BestResponse best_response(const Contract& w, const Technology& tech, double tie_tol) {
    if (tech.size() == 0) throw std::domain_error("empty technology");
    const std::size_t n = tech.size();
    std::vector<double> u(n), slope(n);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = agent_utility(w, tech[i]);
        slope[i] = agent_utility_slope(w, tech[i]);
        if (u[i] > top) top = u[i];
    }

    std::vector<std::size_t> near;
    double best_slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (u[i] >= top - tie_tol) {
            if (near.empty() || slope[i] > best_slope) best_slope = slope[i];
            near.push_back(i);
        }
    }
    std::vector<std::size_t> ties;
    for (std::size_t i : near) {
        if (slope[i] >= best_slope - tie_tol) ties.push_back(i);
    }

    std::size_t pick = ties.front();
    double pick_value = principal_payoff(w, tech[pick]);
    for (std::size_t k = 1; k < ties.size(); ++k) {
        const double v = principal_payoff(w, tech[ties[k]]);
        if (v > pick_value) {
            pick = ties[k];
            pick_value = v;
        }
    }
    return BestResponse{top, pick_value, pick, tech[pick], std::move(ties)};
}

double incentive_gap(const Contract& w1, const Action& a1, const Action& a) {
    return agent_utility(w1, a1) - agent_utility(w1, a);
}

bool respects_cap(const Action& a, const Contract& w1, const Action& a1, double tie_tol) {
    const double gap = agent_utility(w1, a) - agent_utility(w1, a1);
    if (gap > tie_tol) return false;
    if (gap >= -tie_tol) {
        // Tied with the observed action: the tilt must not push it ahead.
        return agent_utility_slope(w1, a) <= agent_utility_slope(w1, a1) + tie_tol;
    }
    return true;
}

bool is_compatible(const Technology& tech, const Contract& w1, const Action& a1,
                   const Technology& known, double tie_tol) {
    if (!tech.contains(a1)) return false;
    for (const auto& k : known) {
        if (!tech.contains(k)) return false;
    }
    for (const auto& a : tech) {
        if (!respects_cap(a, w1, a1, tie_tol)) return false;
    }
    return true;
}

double interim_guarantee(const Contract& w1, const Action& a1, double v2_star, double beta) {
    if (v2_star < 0.0) throw std::domain_error("second-period guarantee must be non-negative");
    return principal_payoff(w1, a1) + beta * v2_star;
}

}  // namespace rc
