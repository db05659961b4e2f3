#include "verify_suites.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rc/adversary.hpp"
#include "rc/agent.hpp"
#include "rc/first_period.hpp"

namespace rc::cli {

namespace {

struct Tally {
    std::ostream& os;
    int failures = 0;

    void check(bool ok, const std::string& label, const std::string& detail) {
        os << (ok ? "PASS " : "FAIL ") << label << "  " << detail << '\n';
        if (!ok) ++failures;
    }
};

std::string num(double x) { return format_number(x); }

int example31(std::ostream& os) {
    Tally t{os};
    const OutputGrid g({0.0, 4000.0});
    const Action a0(Distribution(g, {0.5, 0.5}), 500.0);
    const Technology known({a0});
    const Contract half = Contract::linear(0.5);
    const Action low = action_with_mean(g, 1200.0, 90.0);
    const Action high = action_with_mean(g, 4000.0, 250.0);

    const auto stat = v2_star_advances(null_action(g), known);
    t.check(std::abs(stat.v2_star - 500.0) <= 1e-9, "static-guarantee", "value " + num(stat.v2_star));

    const auto repeat = optimal_second_contract_baseline(half, a0, a0);
    t.check(std::abs(repeat.v2_star - 1000.0) <= 1e-9 && repeat.which == SecondCase::RepeatW1,
            "repeat-after-a0", "value " + num(repeat.v2_star));

    const auto up = optimal_second_contract_baseline(half, high, a0);
    t.check(std::abs(up.v2_star - 2250.0) <= 1e-9 && std::abs(up.contract.share() - 0.25) <= 1e-12,
            "observed-better-action", "value " + num(up.v2_star) + " share " + num(up.contract.share()));

    const auto comp = optimal_second_contract_baseline(half, low, a0);
    const double eff = comp.contract.payments(g)[1] / 4000.0;
    t.check(std::abs(comp.v2_star - 810.0) <= 1e-9 && std::abs(eff - 0.55) <= 1e-12,
            "observed-cheaper-action", "value " + num(comp.v2_star) + " share " + num(eff));

    const auto bench = v2_star_advances(low, known);
    t.check(std::abs(bench.v2_star - 632.7) <= 0.05 && std::abs(bench.contract.share() - 0.274) <= 0.001,
            "static-benchmark", "value " + num(bench.v2_star) + " share " + num(bench.contract.share()));

    for (const auto* a1 : {&a0, &low, &high}) {
        const auto r = optimal_second_contract_baseline(half, *a1, a0);
        t.check(verify_tightness(r, half, *a1, known), "witness-" + to_string(r.which),
                "value " + num(r.v2_star));
    }
    return t.failures;
}

Distribution random_dist(const OutputGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(g.size());
    double s = 0.0;
    for (double& x : w) s += (x = u(rng));
    for (double& x : w) x /= s;
    return Distribution(g, std::move(w));
}

int tightness(const SuiteOptions& opts, std::ostream& os) {
    Tally t{os};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int want = opts.count > 0 ? opts.count : 50;
    int made = 0;
    while (made < want) {
        const int levels = 2 + static_cast<int>(rng() % 4);
        std::vector<double> ys{0.0};
        for (int i = 1; i < levels; ++i) ys.push_back(ys.back() + 100.0 + 900.0 * u(rng));
        const OutputGrid g(ys);
        std::vector<Action> acts;
        const int m = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < m; ++i) acts.emplace_back(random_dist(g, rng), 300.0 * u(rng));
        const Technology known(acts);
        std::vector<double> pay(levels, 0.0);
        for (int i = 1; i < levels; ++i) pay[i] = u(rng) * ys[i];
        const Contract w1 = rng() % 2 ? Contract::linear(u(rng)) : Contract::tabulated(pay);
        const Action a1(random_dist(g, rng), 300.0 * u(rng));
        bool usable = false;
        bool consistent = true;
        for (const auto& a : known) {
            usable = usable || a.mean() > a.cost();
            consistent = consistent && incentive_gap(w1, a1, a) >= 0.0;
        }
        if (!usable || !consistent) continue;
        ++made;

        std::vector<Variant> variants{Variant::General};
        if (m == 1) variants.push_back(Variant::Baseline);
        for (Variant v : variants) {
            const auto r = second_period_report(v, w1, a1, known);
            const double emp =
                empirical_v2(r.contract, w1, a1, known, DeviationFamily::standard(known, a1)).min_payoff;
            const bool ok = verify_tightness(r, w1, a1, known) && std::abs(emp - r.v2_star) <= 1e-9;
            t.check(ok, "tightness#" + std::to_string(made) + "/" + to_string(v) + "/" + to_string(r.which),
                    "closed " + num(r.v2_star) + " oracle " + num(emp));
        }
    }
    return t.failures;
}

// A five-level stand-in for instances too coarse to carry nonlinear contracts.
Instance widen(const Instance& inst) {
    if (inst.grid.size() >= 3) return inst;
    const double top = inst.grid.max();
    const OutputGrid g({0.0, top / 4, top / 2, 3 * top / 4, top});
    std::vector<Action> acts;
    for (const auto& a : inst.known) {
        const Distribution flat(g, std::vector<double>(5, 0.2));
        const double m = a.mean();
        if (m <= top / 2) {
            acts.emplace_back(mix_with_zero(flat, m / (top / 2)), a.cost());
        } else {
            const double lam = (top - m) / (top / 2);  // lam*flat + (1-lam)*point(top)
            std::vector<double> w(5, 0.2 * lam);
            w[4] += 1.0 - lam;
            acts.emplace_back(Distribution(g, std::move(w)), a.cost());
        }
    }
    return Instance{g, Technology(acts), inst.beta, inst.variant, inst.solver};
}

int improvement(const Instance& given, const SuiteOptions& opts, std::ostream& os) {
    Tally t{os};
    const Instance inst = widen(given);
    if (inst.variant == Variant::General && !lbmc_check(inst.known).ok) {
        os << "SKIP improvement  known actions violate the marginal-cost bound\n";
        return 0;
    }
    const int count = opts.count > 0 ? opts.count : 200;
    const auto family = DeviationFamily::observations(inst.known);
    int passed = 0;
    for (const auto& w1 : sample_nonlinear_contracts(inst.grid, count, opts.seed)) {
        const Action a0 = best_response(w1, inst.known).chosen;
        const Linearized lin = linearize(w1, a0);
        const double u = empirical_overall(w1, inst.known, inst.beta, inst.variant, family).min_interim;
        const double ul =
            empirical_overall(lin.contract, inst.known, inst.beta, inst.variant, family).min_interim;
        if (!lin.share_above_one && ul >= u - 1e-6) {
            ++passed;
        } else {
            t.check(false, "improvement", w1.describe() + " U " + num(u) + " linearized " + num(ul));
        }
    }
    t.check(passed == count, "improvement", std::to_string(passed) + "/" + std::to_string(count));
    return t.failures;
}

int oracle(const Instance& inst, const SuiteOptions& opts, std::ostream& os) {
    Tally t{os};
    const int n = opts.count > 0 ? opts.count : 20;
    const auto [lo, hi] = share_interval(inst.variant, inst.known);
    const auto family = DeviationFamily::observations(inst.known);
    for (int i = 0; i < n; ++i) {
        const double s = lo + (hi - lo) * (i + 0.5) / n;
        const double prog = overall_guarantee(inst.variant, s, inst.known, inst.beta).value;
        const double emp =
            empirical_overall(Contract::linear(s), inst.known, inst.beta, inst.variant, family).min_interim;
        t.check(std::abs(prog - emp) <= 1e-6, "oracle s1=" + num(s), "program " + num(prog) + " oracle " + num(emp));
    }
    return t.failures;
}

}  // namespace

int run_suite(const std::string& name, const Instance& inst, const SuiteOptions& opts, std::ostream& os) {
    if (name == "example31") return example31(os);
    if (name == "tightness") return tightness(opts, os);
    if (name == "improvement") return improvement(inst, opts, os);
    if (name == "oracle") return oracle(inst, opts, os);
    if (name == "all") {
        return example31(os) + tightness(opts, os) + improvement(inst, opts, os) + oracle(inst, opts, os);
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace rc::cli
