#include "rc/first_period.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rc/scalar_search.hpp"

namespace rc {

namespace {

double check_share(double s1, double lo, double hi) {
    if (!(s1 >= lo - kValidationTol && s1 <= hi + kValidationTol)) {
        throw std::domain_error("share " + std::to_string(s1) + " outside [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
    }
    return std::clamp(s1, lo, hi);
}

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("discount factor must be finite and >= 0");
}

const Action& sole_known(const Technology& known) {
    if (known.size() != 1) throw std::domain_error("the baseline model needs exactly one known action");
    return known[0];
}

struct InnerResult {
    double f;
    double z;
    double h;
};

// Known-set data used by the general and advances programs.
struct KnownSummary {
    std::vector<double> means;
    std::vector<double> rents;  // s1*E_a - c_a
    double rent = 0.0;          // max over known and the null action
    double top_mean = 0.0;
    double static_value = -HUGE_VAL;  // max of sqrt(E) - sqrt(c)
};

KnownSummary summarize(const Technology& known, double s1) {
    KnownSummary k;
    for (const auto& a : known) {
        k.means.push_back(a.mean());
        k.rents.push_back(s1 * a.mean() - a.cost());
        k.rent = std::max(k.rent, k.rents.back());
        k.top_mean = std::max(k.top_mean, a.mean());
        k.static_value = std::max(k.static_value, std::sqrt(a.mean()) - std::sqrt(a.cost()));
    }
    return k;
}

}  // namespace

Linearized linearize(const Contract& w1, const Action& a0) {
    const double e0 = a0.mean();
    if (!(e0 > 0.0)) throw std::domain_error("linearize needs a known action with positive expected output");
    const double s = expectation(a0.dist(), w1.payments(a0.grid())) / e0;
    if (s > 1.0) return Linearized{Contract::linear(1.0), s, true};
    return Linearized{Contract::linear(s), s, false};
}

std::pair<double, double> share_interval(Variant variant, const Technology& known) {
    if (variant == Variant::Baseline) {
        const Action& a0 = sole_known(known);
        return {a0.cost() / a0.mean(), 1.0};
    }
    return {0.0, 1.0};
}

ProgramSolution overall_guarantee_baseline(double s1, const Action& a0, double beta,
                                           const SolverOptions& opts) {
    check_beta(beta);
    const double e0 = a0.mean();
    if (!(e0 - a0.cost() > 0.0)) {
        throw std::domain_error("known action must have expected output above its cost");
    }
    const double s0sq = a0.cost() / e0;
    const double s0 = std::sqrt(s0sq);
    s1 = check_share(s1, s0sq, 1.0);
    const double k = std::max(s1 - s0sq, 0.0);
    const double r = std::sqrt(1.0 - s1);

    // For fixed x the gap and the cost trade off along h + z = T; only the
    // compensation term and the static term depend on the split.
    auto inner = [&](double x) {
        const double t = std::max(s1 * x - k, 0.0);
        const double rx = std::sqrt(x);
        const double c = std::max(std::sqrt((1.0 - s1) * x), 1.0 - s0);
        double phi;
        double z;
        if (r - std::sqrt(t) >= rx) {
            phi = r - std::sqrt(t);
            z = 0.0;
        } else if (r <= rx - std::sqrt(t)) {
            phi = rx - std::sqrt(t);
            z = t;
        } else {
            const double d = rx - r;
            const double u = 0.5 * (d + std::sqrt(std::max(2.0 * t - d * d, 0.0)));
            phi = rx - u;
            z = std::min(u * u, t);
        }
        const double p = std::max(c, phi);
        return InnerResult{(1.0 - s1) * x + beta * p * p, z, t - z};
    };

    const double lo = s1 > 0.0 ? k / s1 : 0.0;
    const ScalarMin m = grid_min([&](double x) { return inner(x).f; }, lo, 1.0 + beta, opts.x_grid);
    const InnerResult at = inner(m.x);
    return ProgramSolution{m.value * e0, ProgramPoint{m.x, at.z, at.h}};
}

ProgramSolution overall_guarantee_general(double s1, const Technology& known, double beta,
                                          const SolverOptions& opts) {
    check_beta(beta);
    s1 = check_share(s1, 0.0, 1.0);
    const KnownSummary ks = summarize(known, s1);
    const double q = 1.0 - s1;

    // With slack t over the tightest participation constraint, every gap is
    // t + rent - rent_a and the cost is T - t. The compensation term falls
    // in t while the static term rises, so the best split is their crossing.
    auto inner = [&](double x) {
        const double tt = std::max(s1 * x - ks.rent, 0.0);
        const double rx = std::sqrt(x);
        auto comp = [&](double t) {
            double best = -HUGE_VAL;
            for (std::size_t i = 0; i < ks.means.size(); ++i) {
                const double gap = std::max(t + ks.rent - ks.rents[i], 0.0);
                best = std::max(best, std::sqrt(q * ks.means[i]) - std::sqrt(gap));
            }
            return best;
        };
        auto stat = [&](double t) { return rx - std::sqrt(std::max(tt - t, 0.0)); };

        double t;
        double phi;
        if (comp(0.0) <= stat(0.0)) {
            t = 0.0;
            phi = stat(0.0);
        } else if (comp(tt) >= stat(tt)) {
            t = tt;
            phi = comp(tt);
        } else {
            double a = 0.0;
            double b = tt;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                (comp(mid) > stat(mid) ? a : b) = mid;
            }
            t = 0.5 * (a + b);
            phi = std::max(comp(t), stat(t));
        }
        const double p = std::max({phi, std::sqrt(q * x), ks.static_value});
        return InnerResult{q * x + beta * p * p, tt - t, t};
    };

    const double lo = s1 > 0.0 ? ks.rent / s1 : 0.0;
    const double hi = (1.0 + beta) * ks.top_mean;
    const ScalarMin m = grid_min([&](double x) { return inner(x).f; }, std::min(lo, hi), hi, opts.x_grid);
    const InnerResult at = inner(m.x);
    return ProgramSolution{m.value, ProgramPoint{m.x, at.z, at.h}};
}

ProgramSolution overall_guarantee_advances(double s1, const Technology& known, double beta,
                                           const SolverOptions& opts) {
    check_beta(beta);
    s1 = check_share(s1, 0.0, 1.0);
    const KnownSummary ks = summarize(known, s1);
    const double q = 1.0 - s1;

    // The static term falls in the cost, so the cost sits at its cap.
    auto f = [&](double x) {
        const double z = std::max(s1 * x - ks.rent, 0.0);
        const double p = std::max(std::sqrt(x) - std::sqrt(z), ks.static_value);
        return q * x + beta * p * p;
    };
    const double lo = s1 > 0.0 ? ks.rent / s1 : 0.0;
    const double hi = ks.top_mean;
    const ScalarMin m = grid_min(f, std::min(lo, hi), hi, opts.x_grid);
    const double z = std::max(s1 * m.x - ks.rent, 0.0);
    return ProgramSolution{m.value, ProgramPoint{m.x, z, 0.0}};
}

ProgramSolution overall_guarantee(Variant variant, double s1, const Technology& known, double beta,
                                  const SolverOptions& opts) {
    switch (variant) {
        case Variant::Baseline:
            return overall_guarantee_baseline(s1, sole_known(known), beta, opts);
        case Variant::General:
            return overall_guarantee_general(s1, known, beta, opts);
        case Variant::Advances:
        default:
            return overall_guarantee_advances(s1, known, beta, opts);
    }
}

GuaranteeCurve guarantee_curve(Variant variant, const Technology& known, double beta,
                               int resolution, const SolverOptions& opts) {
    if (resolution < 2) throw std::invalid_argument("curve resolution must be at least 2");
    const auto [lo, hi] = share_interval(variant, known);
    GuaranteeCurve c;
    c.shares.reserve(resolution);
    for (int i = 0; i < resolution; ++i) {
        const double s = i + 1 == resolution ? hi : lo + (hi - lo) * i / (resolution - 1);
        const ProgramSolution sol = overall_guarantee(variant, s, known, beta, opts);
        c.shares.push_back(s);
        c.values.push_back(sol.value);
        c.minimizers.push_back(sol.point);
    }
    return c;
}

ShareOptimum optimal_first_share(Variant variant, const Technology& known, double beta,
                                 int resolution, const SolverOptions& opts) {
    if (resolution < 100) throw std::invalid_argument("share resolution must be at least 100");
    if (!(beta > 0.0)) throw std::domain_error("discount factor must be positive");

    ShareOptimum out{0.0, 0.0, guarantee_curve(variant, known, beta, resolution, opts), {}, false};
    const auto& s = out.curve.shares;
    const auto& u = out.curve.values;
    const int n = static_cast<int>(s.size());

    int best = 0;
    for (int i = 0; i < n; ++i) {
        if (u[i] > u[best]) best = i;
    }
    const double tie = 1e-9 * (1.0 + std::abs(u[best]));
    for (int i = 0; i < n; ++i) {
        const bool left = i == 0 || u[i] > u[i - 1];
        const bool right = i + 1 == n || u[i] >= u[i + 1];
        if (left && right && u[i] >= u[best] - tie) out.grid_maximizers.push_back(s[i]);
    }

    auto neg = [&](double x) { return -overall_guarantee(variant, x, known, beta, opts).value; };
    const ScalarMin r = golden_min(neg, s[std::max(best - 1, 0)], s[std::min(best + 1, n - 1)], 1e-12);
    if (-r.value >= u[best]) {
        out.s1_star = r.x;
        out.u_star = -r.value;
    } else {
        out.s1_star = s[best];
        out.u_star = u[best];
    }
    out.optimality_unproven = variant == Variant::General && !lbmc_check(known).ok;
    return out;
}

LbmcResult lbmc_check(const Technology& known) {
    for (const auto& a : known) {
        for (const auto& b : known) {
            if (a.mean() > 0.0 && a.mean() < b.mean() &&
                b.cost() - a.cost() < b.mean() - a.mean() - kValidationTol) {
                return LbmcResult{false, std::make_pair(a, b)};
            }
        }
    }
    return LbmcResult{true, std::nullopt};
}

std::vector<SweepRow> exploration_sweep(const Technology& known, const std::vector<double>& betas,
                                        int resolution, const SolverOptions& opts) {
    if (known.size() != 1) throw std::domain_error("the exploration sweep needs exactly one known action");
    std::vector<SweepRow> rows;
    rows.reserve(betas.size());
    for (double b : betas) {
        const ShareOptimum o = optimal_first_share(Variant::Advances, known, b, resolution, opts);
        rows.push_back(SweepRow{b, o.s1_star, o.u_star});
    }
    return rows;
}

}  // namespace rc
