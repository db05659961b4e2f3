#include "rc/second_period.hpp"

#include <cmath>
#include <limits>

#include "rc/agent.hpp"

namespace rc {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Baseline:
            return "baseline";
        case Variant::General:
            return "general";
        case Variant::Advances:
            return "advances";
    }
    return "?";
}

std::string to_string(SecondCase c) {
    switch (c) {
        case SecondCase::RepeatW1:
            return "RepeatW1";
        case SecondCase::BlendCompensate:
            return "BlendCompensate";
        case SecondCase::LinearKnown:
            return "LinearKnown";
        case SecondCase::LinearObserved:
            return "LinearObserved";
        case SecondCase::ModifiedW1:
            return "ModifiedW1";
        case SecondCase::LinearStatic:
            return "LinearStatic";
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    if (name == "baseline") return Variant::Baseline;
    if (name == "general") return Variant::General;
    if (name == "advances") return Variant::Advances;
    throw std::invalid_argument("unknown variant '" + name + "'");
}

std::optional<double> signed_root(double x) {
    if (x < 0.0) return std::nullopt;
    return std::sqrt(x);
}

namespace {

struct Moments {
    double ey;  // E_F[y]
    double ew;  // E_F[w1]
    double cost;
    double utility() const { return ew - cost; }
    double residual() const { return ey - ew; }  // E_F[y - w1]
};

Moments moments(const Action& a, const std::vector<double>& pay) {
    return Moments{a.mean(), expectation(a.dist(), pay), a.cost()};
}

// Gap of the observed action over `a`; slightly negative gaps are rounding.
double checked_gap(const Moments& observed, const Moments& a) {
    const double g = observed.utility() - a.utility();
    if (g < -kTieTol) {
        throw IncompatibleObservation("observed action is worse for the first agent than a known action (gap " +
                                      std::to_string(g) + ")");
    }
    return std::max(g, 0.0);
}

// sqrt(residual) - sqrt(gap), or nullopt for minus infinity.
std::optional<double> modified_term(const Moments& a, double gap) {
    const auto r = signed_root(a.residual());
    if (!r) return std::nullopt;
    return *r - std::sqrt(gap);
}

double static_term(const Action& a) { return std::sqrt(a.mean()) - std::sqrt(a.cost()); }

double blend_weight(double gap, double residual) {
    if (gap == 0.0) return 0.0;
    if (!(residual > 0.0)) throw InternalError("blend weight with non-positive residual output");
    const double m = std::sqrt(gap / residual);
    if (m > 1.0 + kTieTol) throw InternalError("blend weight above 1");
    return std::min(m, 1.0);
}

double nonneg_cost(double c, double scale) {
    if (c >= 0.0) return c;
    if (c > -kTieTol * (1.0 + scale)) return 0.0;
    throw InternalError("constructed deviation has negative cost " + std::to_string(c));
}

Technology base_technology(const Technology& known, const Action& a1) {
    return known.contains(a1) ? known : known.with(a1);
}

// Adds the deviation to known + {a1}, choosing the first tilt under which the
// second agent picks it and the principal gets `target`.
Technology finish_witness(const Technology& known, const Action& a1, const Action& deviation,
                          const Contract& w1, const Contract& w2, double target, bool need_compat) {
    const Technology base = base_technology(known, a1);
    for (const auto& cand : tilt_candidates(deviation, w1, w2)) {
        const Technology tech = base.with(cand);
        if (need_compat && !is_compatible(tech, w1, a1, known)) continue;
        const auto br = best_response(w2, tech);
        if (std::abs(br.principal_value - target) <= kTieTol) return tech;
    }
    return base.with(deviation);
}

Technology blend_witness(const Contract& w1, const Action& a1, const Technology& known,
                         const Action& anchor, double target) {
    const auto pay = w1.payments(a1.grid());
    const Moments o = moments(a1, pay);
    const Moments s = moments(anchor, pay);
    const double g = checked_gap(o, s);
    if (g == 0.0 && anchor.same_as(a1)) return base_technology(known, a1);
    const double m = blend_weight(g, s.residual());
    const double c = nonneg_cost(s.cost - (m * s.ew + g), s.cost);
    const Action dev(mix_with_zero(anchor.dist(), 1.0 - m), c);
    const Contract w2 = Contract::blend(w1, m);
    return finish_witness(known, a1, dev, w1, w2, target, true);
}

Technology linear_witness(const Contract& w1, const Action& a1, const Technology& known,
                          const Action& anchor, double target, bool need_compat) {
    const double s2 = std::sqrt(anchor.cost() / anchor.mean());
    const Action dev(mix_with_zero(anchor.dist(), 1.0 - s2), 0.0);
    return finish_witness(known, a1, dev, w1, Contract::linear(s2), target, need_compat);
}

double square(double x) { return x * x; }

const Action& sole_known(const Technology& known) {
    if (known.size() != 1) {
        throw std::domain_error("the baseline model needs exactly one known action");
    }
    return known[0];
}

}  // namespace

PhiResult phi_baseline(const Contract& w1, const Action& a1, const Action& a0) {
    if (!(a0.mean() - a0.cost() > 0.0)) {
        throw std::domain_error("known action must have expected output above its cost");
    }
    const auto pay = w1.payments(a1.grid());
    const Moments o = moments(a1, pay);
    const Moments k = moments(a0, pay);
    const double g = checked_gap(o, k);

    const std::optional<double> terms[4] = {
        signed_root(o.residual()),
        modified_term(k, g),
        static_term(a0),
        static_term(a1),
    };
    constexpr SecondCase cases[4] = {SecondCase::RepeatW1, SecondCase::BlendCompensate,
                                     SecondCase::LinearKnown, SecondCase::LinearObserved};
    PhiResult best{-std::numeric_limits<double>::infinity(), SecondCase::RepeatW1};
    for (int i = 0; i < 4; ++i) {
        if (terms[i] && *terms[i] > best.phi) best = PhiResult{*terms[i], cases[i]};
    }
    return best;
}

SecondPeriodReport optimal_second_contract_baseline(const Contract& w1, const Action& a1,
                                                    const Action& a0) {
    const PhiResult r = phi_baseline(w1, a1, a0);
    const double v2 = square(r.phi);
    const Technology known({a0});
    switch (r.which) {
        case SecondCase::RepeatW1:
            return {Variant::Baseline, r.phi, v2, r.which, a1, w1, base_technology(known, a1)};
        case SecondCase::BlendCompensate: {
            const auto pay = w1.payments(a1.grid());
            const double g = checked_gap(moments(a1, pay), moments(a0, pay));
            const double m = blend_weight(g, moments(a0, pay).residual());
            return {Variant::Baseline, r.phi, v2, r.which, a0, Contract::blend(w1, m),
                    blend_witness(w1, a1, known, a0, v2)};
        }
        case SecondCase::LinearKnown:
            return {Variant::Baseline, r.phi, v2, r.which, a0,
                    Contract::linear(std::sqrt(a0.cost() / a0.mean())),
                    linear_witness(w1, a1, known, a0, v2, true)};
        case SecondCase::LinearObserved:
        default:
            return {Variant::Baseline, r.phi, v2, r.which, a1,
                    Contract::linear(std::sqrt(a1.cost() / a1.mean())),
                    linear_witness(w1, a1, known, a1, v2, true)};
    }
}

Attained phi1_general(const Contract& w1, const Action& a1, const Technology& known) {
    const auto pay = w1.payments(a1.grid());
    const Moments o = moments(a1, pay);
    // a1 contributes its own residual (zero gap) and is listed first so that
    // ties resolve as in the single-action model.
    Attained best{-std::numeric_limits<double>::infinity(), a1, true};
    if (const auto t = signed_root(o.residual())) best.value = *t;
    for (const auto& a : known) {
        const auto t = modified_term(moments(a, pay), checked_gap(o, moments(a, pay)));
        if (t && *t > best.value) best = Attained{*t, a, false};
    }
    return best;
}

Attained phi2_general(const Action& a1, const Technology& known) {
    Attained best{-std::numeric_limits<double>::infinity(), known[0], false};
    for (const auto& a : known) {
        const double t = static_term(a);
        if (t > best.value) best = Attained{t, a, false};
    }
    const double t = static_term(a1);
    if (t > best.value) best = Attained{t, a1, true};
    return best;
}

SecondPeriodReport optimal_second_contract_general(const Contract& w1, const Action& a1,
                                                   const Technology& known) {
    const Attained p1 = phi1_general(w1, a1, known);
    const Attained p2 = phi2_general(a1, known);
    if (p1.value >= p2.value) {
        const double v2 = square(p1.value);
        if (p1.is_observed) {
            return {Variant::General, p1.value, v2, SecondCase::ModifiedW1, a1, w1,
                    base_technology(known, a1)};
        }
        const auto pay = w1.payments(a1.grid());
        const Moments s = moments(p1.action, pay);
        const double m = blend_weight(checked_gap(moments(a1, pay), s), s.residual());
        return {Variant::General, p1.value, v2, SecondCase::ModifiedW1, p1.action,
                Contract::blend(w1, m), blend_witness(w1, a1, known, p1.action, v2)};
    }
    const double v2 = square(p2.value);
    return {Variant::General, p2.value, v2, SecondCase::LinearStatic, p2.action,
            Contract::linear(std::sqrt(p2.action.cost() / p2.action.mean())),
            linear_witness(w1, a1, known, p2.action, v2, true)};
}

SecondPeriodReport v2_star_advances(const Action& a1, const Technology& known) {
    const Attained p2 = phi2_general(a1, known);
    const double v2 = square(p2.value);
    const Contract w2 = Contract::linear(std::sqrt(p2.action.cost() / p2.action.mean()));
    // No compatibility requirement: the second agent may hold new actions.
    return {Variant::Advances, p2.value, v2, SecondCase::LinearStatic, p2.action, w2,
            linear_witness(w2, a1, known, p2.action, v2, false)};
}

double optimal_v2(Variant variant, const Contract& w1, const Action& a1, const Technology& known) {
    switch (variant) {
        case Variant::Baseline:
            return square(phi_baseline(w1, a1, sole_known(known)).phi);
        case Variant::General:
            return square(std::max(phi1_general(w1, a1, known).value, phi2_general(a1, known).value));
        case Variant::Advances:
        default:
            return square(phi2_general(a1, known).value);
    }
}

SecondPeriodReport second_period_report(Variant variant, const Contract& w1, const Action& a1,
                                        const Technology& known) {
    switch (variant) {
        case Variant::Baseline:
            return optimal_second_contract_baseline(w1, a1, sole_known(known));
        case Variant::General:
            return optimal_second_contract_general(w1, a1, known);
        case Variant::Advances:
        default:
            return v2_star_advances(a1, known);
    }
}

Technology worst_case_witness(const Contract& w1, const Action& a1, const Technology& known,
                              SecondCase which) {
    switch (which) {
        case SecondCase::RepeatW1:
            return base_technology(known, a1);
        case SecondCase::BlendCompensate: {
            const Action& a0 = sole_known(known);
            const auto t = modified_term(moments(a0, w1.payments(a0.grid())),
                                         std::max(0.0, incentive_gap(w1, a1, a0)));
            return blend_witness(w1, a1, known, a0, t ? square(*t) : 0.0);
        }
        case SecondCase::LinearKnown: {
            const Action& a0 = sole_known(known);
            return linear_witness(w1, a1, known, a0, square(static_term(a0)), true);
        }
        case SecondCase::LinearObserved:
            return linear_witness(w1, a1, known, a1, square(static_term(a1)), true);
        case SecondCase::ModifiedW1: {
            const Attained p1 = phi1_general(w1, a1, known);
            if (p1.is_observed) return base_technology(known, a1);
            return blend_witness(w1, a1, known, p1.action, square(p1.value));
        }
        case SecondCase::LinearStatic:
        default: {
            const Attained p2 = phi2_general(a1, known);
            return linear_witness(w1, a1, known, p2.action, square(p2.value), true);
        }
    }
}

std::vector<Action> tilt_candidates(const Action& deviation, const Contract& w1,
                                    const Contract& w2) {
    std::vector<Action> out{deviation.without_tilt()};
    const auto& f = deviation.dist();
    const double e1 = expectation(f, w1.payments(f.grid()));
    const double e2 = expectation(f, w2.payments(f.grid()));
    std::vector<double> toward(f.weights().begin(), f.weights().end());
    toward[0] -= 1.0;  // F - delta_0
    const bool degenerate = f[0] >= 1.0;

    if (f[0] > 0.0 && !degenerate) {
        out.push_back(deviation.with_tilt(Tilt{toward, 0.5 * (e1 + e2)}));
        out.push_back(deviation.with_tilt(Tilt{toward, 0.0}));
    }
    if (deviation.cost() > 0.0) {
        out.push_back(deviation.with_tilt(Tilt{std::vector<double>(f.grid().size(), 0.0), -1.0}));
        if (!degenerate) {
            std::vector<double> away = toward;
            for (double& x : away) x = -x;
            out.push_back(deviation.with_tilt(Tilt{std::move(away), -0.5 * (e1 + e2)}));
        }
    }
    return out;
}

}  // namespace rc
