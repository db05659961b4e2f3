#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "rc/adversary.hpp"
#include "rc/agent.hpp"
#include "rc/first_period.hpp"

using namespace rc;

namespace {

const OutputGrid kTwo({0.0, 4000.0});
const Action kA0(Distribution(kTwo, {0.5, 0.5}), 500.0);
const Technology kKnown({kA0});
const Contract kHalf = Contract::linear(0.5);
const Action kCheap = action_with_mean(kTwo, 1200.0, 90.0);
const Action kHigh = action_with_mean(kTwo, 4000.0, 250.0);

}  // namespace

TEST(DeviationFamily, Validation) {
    DeviationFamily f = DeviationFamily::standard(kKnown, kCheap);
    EXPECT_EQ(f.lambda_grid.size(), 101u);
    EXPECT_EQ(f.cost_grid.size(), 101u);
    EXPECT_DOUBLE_EQ(f.cost_grid.back(), 750.0);
    EXPECT_NO_THROW(f.validate());
    f.lambda_grid.push_back(1.5);
    EXPECT_THROW(f.validate(), std::invalid_argument);
    f.lambda_grid.clear();
    EXPECT_THROW(f.validate(), std::invalid_argument);
}

TEST(EmpiricalV2, CompensatedContractEarns810) {
    const auto r = optimal_second_contract_baseline(kHalf, kCheap, kA0);
    const auto e = empirical_v2(r.contract, kHalf, kCheap, kKnown, DeviationFamily::standard(kKnown, kCheap));
    EXPECT_NEAR(e.min_payoff, 810.0, 1e-6);
    EXPECT_TRUE(is_compatible(e.worst, kHalf, kCheap, kKnown));
}

TEST(EmpiricalV2, RepeatingAfterA0Earns1000) {
    // Zero-cost deviations producing 1000 + eps would beat a0 under w1 and are excluded.
    DeviationFamily f = DeviationFamily::standard(kKnown, kA0);
    f.bases.push_back(Distribution::point(kTwo, 1));
    f.cost_grid.push_back(1e-6);
    const auto e = empirical_v2(kHalf, kHalf, kA0, kKnown, f);
    EXPECT_NEAR(e.min_payoff, 1000.0, 1e-9);
}

TEST(EmpiricalV2, StaticBenchmarkWithoutCap) {
    DeviationFamily f = DeviationFamily::standard(kKnown, kCheap);
    f.enforce_cap = false;
    const Technology both({kA0, kCheap});
    const auto e = empirical_v2(Contract::linear(0.274), kHalf, kCheap, both, f);
    EXPECT_NEAR(e.min_payoff, 632.7, 0.05);
}

TEST(EmpiricalV2, RejectsIncompatibleObservation) {
    EXPECT_THROW(empirical_v2(kHalf, kHalf, null_action(kTwo), kKnown, DeviationFamily::standard(kKnown, kA0)),
                 IncompatibleObservation);
}

TEST(EmpiricalOverall, MatchesProgramOnLinearContracts) {
    const auto fam = DeviationFamily::observations(kKnown);
    for (Variant v : {Variant::Baseline, Variant::General, Variant::Advances}) {
        const auto [lo, hi] = share_interval(v, kKnown);
        for (int i = 0; i < 6; ++i) {
            const double s = lo + (hi - lo) * (i + 0.5) / 6;
            const double prog = overall_guarantee(v, s, kKnown, 0.8).value;
            const double emp = empirical_overall(Contract::linear(s), kKnown, 0.8, v, fam).min_interim;
            EXPECT_NEAR(emp, prog, 1e-6) << to_string(v) << " s1 " << s;
        }
    }
}

TEST(EmpiricalOverall, ZeroDiscountIsTheFirstPeriodWorstCase) {
    const auto fam = DeviationFamily::observations(kKnown);
    const auto r = empirical_overall(kHalf, kKnown, 0.0, Variant::Baseline, fam);
    // Cheapest rational observation: mean output 1000 at zero cost, half of it paid out.
    EXPECT_NEAR(r.min_interim, 500.0, 1e-9);
    EXPECT_DOUBLE_EQ(r.min_interim, r.first_period);
}

TEST(EmpiricalOverall, LinearizationImproves) {
    const OutputGrid g({0.0, 1000.0, 2000.0, 3000.0, 4000.0});
    const Technology known({Action(Distribution(g, {0.2, 0.2, 0.2, 0.2, 0.2}), 500.0)});
    const auto fam = DeviationFamily::observations(known, 41, 41);
    for (const auto& w : sample_nonlinear_contracts(g, 12, 5)) {
        const auto lin = linearize(w, known[0]);
        const double u = empirical_overall(w, known, 0.8, Variant::Baseline, fam).min_interim;
        const double ul = empirical_overall(lin.contract, known, 0.8, Variant::Baseline, fam).min_interim;
        EXPECT_GE(ul, u - 1e-6) << w.describe();
    }
}

TEST(VerifyTightness, ExampleCases) {
    const Contract generous = Contract::linear(0.9);
    const std::vector<std::pair<Contract, Action>> cases{
        {kHalf, kA0}, {kHalf, kCheap}, {generous, kA0}, {kHalf, kHigh}};
    std::set<SecondCase> reached;
    for (const auto& [w1, a1] : cases) {
        const auto r = optimal_second_contract_baseline(w1, a1, kA0);
        reached.insert(r.which);
        EXPECT_TRUE(verify_tightness(r, w1, a1, kKnown)) << to_string(r.which);
    }
    EXPECT_EQ(reached.size(), 4u);
}

TEST(VerifyTightness, CorruptedWitnessFails) {
    auto r = optimal_second_contract_baseline(kHalf, kCheap, kA0);
    std::vector<Action> acts;
    for (const auto& a : r.witness) {
        const bool extra = !kKnown.contains(a) && !a.same_as(kCheap);
        acts.push_back(extra ? Action(a.dist(), a.cost() + 50.0) : a);
    }
    r.witness = Technology(acts);
    EXPECT_FALSE(verify_tightness(r, kHalf, kCheap, kKnown));
}

TEST(SampleNonlinearContracts, DeterministicValidDistinct) {
    const OutputGrid g({0.0, 1.0, 2.0, 3.0, 4.0});
    const auto a = sample_nonlinear_contracts(g, 200, 99);
    const auto b = sample_nonlinear_contracts(g, 200, 99);
    ASSERT_EQ(a.size(), 200u);
    std::set<std::vector<double>> tables;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto pa = a[i].payments(g);
        EXPECT_EQ(pa, b[i].payments(g));
        EXPECT_EQ(pa[0], 0.0);
        bool linear = true;
        for (std::size_t k = 0; k < g.size(); ++k) {
            EXPECT_GE(pa[k], 0.0);
            EXPECT_LE(pa[k], g[k]);
            if (k > 1) linear = linear && std::abs(pa[k] / g[k] - pa[1] / g[1]) < 1e-12;
        }
        EXPECT_FALSE(linear);
        tables.insert(pa);
    }
    EXPECT_EQ(tables.size(), 200u);
    EXPECT_THROW(sample_nonlinear_contracts(kTwo, 1, 1), std::invalid_argument);
}

// Property tests.

TEST(AdversaryProperties, OracleAttainsAndNeverBeatsClosedForm) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int n = 0;
    while (n < 40) {
        const OutputGrid g = oracle::random_grid(rng, 2 + static_cast<int>(rng() % 4));
        std::vector<Action> acts;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 3); ++i) {
            acts.emplace_back(oracle::random_dist(g, rng), 300.0 * u(rng));
        }
        const Technology known(acts);
        const Contract w1 = Contract::linear(u(rng));
        const Action a1(oracle::random_dist(g, rng), 300.0 * u(rng));
        bool ok = false;
        for (const auto& a : known) ok = ok || a.mean() > a.cost();
        for (const auto& a : known) ok = ok && incentive_gap(w1, a1, a) >= 0.0;
        if (!ok) continue;
        ++n;
        const auto r = optimal_second_contract_general(w1, a1, known);
        const auto fam = DeviationFamily::standard(known, a1, 31, 31);
        const double emp = empirical_v2(r.contract, w1, a1, known, fam).min_payoff;
        EXPECT_NEAR(emp, r.v2_star, 1e-9);

        // A larger family can only lower the minimum.
        DeviationFamily small = fam;
        small.include_constructed = false;
        DeviationFamily smaller = small;
        smaller.lambda_grid = {0.0, 0.5, 1.0};
        EXPECT_LE(empirical_v2(r.contract, w1, a1, known, small).min_payoff,
                  empirical_v2(r.contract, w1, a1, known, smaller).min_payoff);
        EXPECT_LE(emp, empirical_v2(r.contract, w1, a1, known, small).min_payoff);
    }
}
