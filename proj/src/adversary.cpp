#include "rc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rc/agent.hpp"
#include "rc/first_period.hpp"
#include "rc/scalar_search.hpp"

namespace rc {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("grid needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    return v;
}

Technology base_of(const Technology& known, const Action& a1) {
    return known.contains(a1) ? known : known.with(a1);
}

bool untilted(const Technology& t) {
    return std::all_of(t.begin(), t.end(), [](const Action& a) { return !a.tilt(); });
}

// Best response to w2 on base + {d} for an untilted d and base, without
// rebuilding the technology. Mirrors best_response's ordering.
struct FastScorer {
    std::vector<double> u2;
    std::vector<double> p2;

    FastScorer(const Technology& base, const Contract& w2) {
        for (const auto& a : base) {
            u2.push_back(agent_utility(w2, a));
            p2.push_back(principal_payoff(w2, a));
        }
    }

    double payoff_with(double ud, double pd) const {
        double top = ud;
        for (double u : u2) top = std::max(top, u);
        bool have = false;
        double best = 0.0;
        for (std::size_t i = 0; i < u2.size(); ++i) {
            if (u2[i] >= top - kTieTol && (!have || p2[i] > best)) {
                best = p2[i];
                have = true;
            }
        }
        if (ud >= top - kTieTol && (!have || pd > best)) best = pd;
        return best;
    }
};

// Deviations that make the second agent indifferent with an anchor action,
// built without reference to any closed form.
std::vector<Action> converse_deviations(const Contract& w2, const Contract& w1, const Action& a1,
                                        const Technology& base) {
    const OutputGrid& grid = a1.grid();
    std::vector<Action> out{null_action(grid)};
    const double u1_obs = agent_utility(w1, a1);
    for (const auto& a : base) {
        const double e2 = expectation(a.dist(), w2.payments(grid));
        const double e1 = expectation(a.dist(), w1.payments(grid));
        // Costless mixture matching the anchor's utility under w2.
        if (e2 > 0.0) {
            const double lam = std::clamp(1.0 - a.cost() / e2, 0.0, 1.0);
            out.emplace_back(mix_with_zero(a.dist(), lam), 0.0);
        }
        // Mixture tied with the anchor under w2 and with a1 under w1.
        const double denom = e1 - e2;
        if (std::abs(denom) > 1e-12 * (1.0 + std::abs(e1))) {
            const double lam = (u1_obs - (e2 - a.cost())) / denom;
            if (lam >= -kTieTol && lam <= 1.0 + kTieTol) {
                const double l = std::clamp(lam, 0.0, 1.0);
                const double c = a.cost() - (1.0 - l) * e2;
                if (c >= -kTieTol * (1.0 + a.cost())) {
                    out.emplace_back(mix_with_zero(a.dist(), l), std::max(c, 0.0));
                }
            }
        }
    }
    return out;
}

}  // namespace

void DeviationFamily::validate() const {
    if (bases.empty() || lambda_grid.empty() || cost_grid.empty()) {
        throw std::invalid_argument("deviation family grids must be nonempty");
    }
    for (double l : lambda_grid) {
        if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("mixture weights must lie in [0,1]");
    }
    for (double c : cost_grid) {
        if (!(c >= 0.0)) throw std::invalid_argument("deviation costs must be non-negative");
    }
}

DeviationFamily DeviationFamily::standard(const Technology& known, const Action& a1, int lambda_points,
                                          int cost_points) {
    DeviationFamily f;
    double top_cost = 0.0;
    for (const auto& a : known) {
        f.bases.push_back(a.dist());
        top_cost = std::max(top_cost, a.cost());
    }
    f.bases.push_back(a1.dist());
    f.lambda_grid = linspace(0.0, 1.0, lambda_points);
    f.cost_grid = linspace(0.0, 1.5 * top_cost, cost_points);
    return f;
}

DeviationFamily DeviationFamily::observations(const Technology& known, int lambda_points, int cost_points) {
    DeviationFamily f;
    double top_cost = 0.0;
    for (const auto& a : known) {
        f.bases.push_back(a.dist());
        top_cost = std::max(top_cost, a.cost());
    }
    const OutputGrid& grid = known[0].grid();
    for (std::size_t i = 1; i < grid.size(); ++i) f.bases.push_back(Distribution::point(grid, i));
    f.lambda_grid = linspace(0.0, 1.0, lambda_points);
    f.cost_grid = linspace(0.0, 1.5 * top_cost, cost_points);
    return f;
}

EmpiricalV2 empirical_v2(const Contract& w2, const Contract& w1, const Action& a1,
                         const Technology& known, const DeviationFamily& family) {
    family.validate();
    for (const auto& a : known) {
        if (incentive_gap(w1, a1, a) < -kTieTol) {
            throw IncompatibleObservation("observed action is worse for the first agent than a known action");
        }
    }
    const Technology base = base_of(known, a1);
    EmpiricalV2 best{best_response(w2, base).principal_value, base};

    auto consider = [&](const Action& d) {
        const Technology tech = base.with(d);
        if (family.enforce_cap && !is_compatible(tech, w1, a1, known)) return;
        const double v = best_response(w2, tech).principal_value;
        if (v < best.min_payoff) best = EmpiricalV2{v, tech};
    };

    const OutputGrid& grid = a1.grid();
    const auto pay1 = w1.payments(grid);
    const auto pay2 = w2.payments(grid);
    const double u1_obs = agent_utility(w1, a1);
    const bool fast = untilted(base);
    const FastScorer scorer(base, w2);
    for (const auto& b : family.bases) {
        const double e1 = expectation(b, pay1);
        const double e2 = expectation(b, pay2);
        const double ey = b.mean();
        for (double lam : family.lambda_grid) {
            for (double c : family.cost_grid) {
                if (family.enforce_cap && lam * e1 - c > u1_obs + kTieTol) continue;
                if (!fast) {
                    consider(Action(mix_with_zero(b, lam), c));
                    continue;
                }
                const double v = scorer.payoff_with(lam * e2 - c, lam * (ey - e2));
                if (v < best.min_payoff) {
                    best = EmpiricalV2{v, base.with(Action(mix_with_zero(b, lam), c))};
                }
            }
        }
    }

    if (family.include_constructed) {
        std::vector<Action> devs = converse_deviations(w2, w1, a1, base);
        if (family.enforce_cap) {
            // Witness deviations of the closed-form analysis as well.
            std::vector<SecondPeriodReport> reports{second_period_report(Variant::General, w1, a1, known)};
            if (known.size() == 1) reports.push_back(second_period_report(Variant::Baseline, w1, a1, known));
            for (const auto& r : reports) {
                for (const auto& a : r.witness) {
                    if (!base.contains(a)) devs.push_back(a.without_tilt());
                }
            }
        }
        for (const auto& d : devs) {
            for (const auto& cand : tilt_candidates(d, w1, w2)) consider(cand);
        }
    }
    return best;
}

EmpiricalOverall empirical_overall(const Contract& w1, const Technology& known, double beta,
                                   Variant variant, const DeviationFamily& family) {
    family.validate();
    if (variant == Variant::Baseline && known.size() != 1) {
        throw std::domain_error("the baseline model needs exactly one known action");
    }
    const OutputGrid& grid = known[0].grid();
    const auto pay = w1.payments(grid);
    double known_best = 0.0;  // the null action is always available
    for (const auto& a : known) known_best = std::max(known_best, agent_utility(w1, a));

    struct Candidate {
        Distribution dist;
        std::vector<double> cost_hints;
    };
    std::vector<Candidate> cands;
    for (const auto& b : family.bases) {
        for (double lam : family.lambda_grid) cands.push_back({mix_with_zero(b, lam), {}});
    }
    if (family.include_constructed) {
        for (const auto& a : known) cands.push_back({a.dist(), {a.cost()}});
        // The known action the first agent picks when nothing else exists.
        const Action a0 = variant == Variant::Baseline ? known[0] : best_response(w1, known).chosen;
        const Linearized lin = linearize(w1, a0);
        // Below the baseline interval the known action is unattractive and the
        // general program (with the participation constraint) applies.
        const double lo = share_interval(variant, known).first;
        const Variant program = variant == Variant::Baseline && lin.share < lo ? Variant::General : variant;
        if (!lin.share_above_one) {
            const ProgramSolution sol = overall_guarantee(program, lin.share, known, beta);
            const double scale = program == Variant::Baseline ? a0.mean() : 1.0;
            const double x = sol.point.x * scale;
            const double z = sol.point.z * scale;
            if (x <= grid.max()) cands.push_back({action_with_mean(grid, x, z).dist(), {z}});
            // Same expected output reached by scaling the known action down.
            if (x < a0.mean()) cands.push_back({mix_with_zero(a0.dist(), x / a0.mean()), {z}});
        }
    }

    EmpiricalOverall best{HUGE_VAL, known[0], 0.0, 0.0};
    for (const auto& cand : cands) {
        const double ew = expectation(cand.dist, pay);
        const double cmax = ew - known_best;
        if (cmax < -kTieTol) continue;
        const double top = std::max(cmax, 0.0);
        const double first = cand.dist.mean() - ew;

        auto v2 = [&](double c) {
            return optimal_v2(variant, w1, Action(cand.dist, std::clamp(c, 0.0, top)), known);
        };
        auto interim = [&](double c) { return first + beta * v2(c); };
        auto record = [&](double c) {
            c = std::clamp(c, 0.0, top);
            const double v2c = v2(c);
            const double u = first + beta * v2c;
            if (u < best.min_interim) best = EmpiricalOverall{u, Action(cand.dist, c), first, v2c};
        };

        // Each term of the second-period guarantee is monotone in the cost,
        // so the interim guarantee is quasi-convex in it.
        record(golden_min(interim, 0.0, top).x);
        record(0.0);
        record(top);
        for (double c : family.cost_grid) {
            if (c <= top) record(c);
        }
        for (double c : cand.cost_hints) record(c);
    }
    return best;
}

bool verify_tightness(const SecondPeriodReport& report, const Contract& w1, const Action& a1,
                      const Technology& known) {
    const BestResponse br = best_response(report.contract, report.witness);
    if (!(std::abs(br.principal_value - report.v2_star) <= kTieTol)) return false;
    if (report.variant == Variant::Advances) {
        if (!report.witness.contains(a1)) return false;
        return std::all_of(known.begin(), known.end(),
                           [&](const Action& a) { return report.witness.contains(a); });
    }
    return is_compatible(report.witness, w1, a1, known);
}

std::vector<Contract> sample_nonlinear_contracts(const OutputGrid& grid, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("count must be at least 1");
    if (grid.size() < 3) throw std::invalid_argument("nonlinear contracts need at least three output levels");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Contract> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        std::vector<double> share(grid.size(), 0.0);
        for (std::size_t i = 1; i < grid.size(); ++i) share[i] = unit(rng);
        const auto [lo, hi] = std::minmax_element(share.begin() + 1, share.end());
        if (*hi - *lo < 1e-6) continue;  // linear on the grid
        std::vector<double> pay(grid.size(), 0.0);
        for (std::size_t i = 1; i < grid.size(); ++i) pay[i] = share[i] * grid[i];
        out.push_back(Contract::tabulated(std::move(pay)));
    }
    return out;
}

}  // namespace rc
