#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rc/core.hpp"

using namespace rc;

namespace {

const OutputGrid kTwo({0.0, 4000.0});

Action two_point(double mean, double cost) { return action_with_mean(kTwo, mean, cost); }

}  // namespace

TEST(OutputGrid, RejectsBadLevels) {
    EXPECT_THROW(OutputGrid({0.0}), std::invalid_argument);
    EXPECT_THROW(OutputGrid({1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(OutputGrid({0.0, 2.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(OutputGrid({0.0, -1.0}), std::invalid_argument);
    EXPECT_NO_THROW(OutputGrid({0.0, 1.0}));
}

TEST(Distribution, ValidatesWeights) {
    EXPECT_THROW(Distribution(kTwo, {0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(Distribution(kTwo, {-0.1, 1.1}), std::invalid_argument);
    EXPECT_THROW(Distribution(kTwo, {1.0}), AlignmentError);
    EXPECT_NO_THROW(Distribution(kTwo, {0.5, 0.5 + 5e-13}));
}

TEST(Action, RejectsNegativeCost) {
    EXPECT_THROW(Action(Distribution(kTwo, {0.5, 0.5}), -1.0), std::invalid_argument);
}

TEST(Expectation, Examples) {
    const Distribution half(kTwo, {0.5, 0.5});
    EXPECT_DOUBLE_EQ(expectation(half, kTwo.levels()), 2000.0);
    EXPECT_DOUBLE_EQ(expectation(half, std::vector<double>{0.0, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(expectation(Distribution(kTwo, {0.3, 0.7}), kTwo.levels()), 2800.0);
    EXPECT_THROW(expectation(half, std::vector<double>{0.0, 1.0, 2.0}), AlignmentError);
}

TEST(EvaluateContract, Examples) {
    EXPECT_EQ(evaluate_contract(Contract::linear(0.5), kTwo), (std::vector<double>{0.0, 2000.0}));
    EXPECT_EQ(evaluate_contract(Contract::blend(Contract::linear(0.5), 0.1), kTwo),
              (std::vector<double>{0.0, 2200.0}));
    EXPECT_EQ(evaluate_contract(Contract::tabulated({0.0, 1500.0}), kTwo), (std::vector<double>{0.0, 1500.0}));
}

TEST(EvaluateContract, Errors) {
    EXPECT_THROW(Contract::tabulated({10.0, 1500.0}), InvalidContract);
    EXPECT_THROW(Contract::tabulated({0.0, -1.0}), InvalidContract);
    EXPECT_THROW(Contract::linear(1.5), InvalidContract);
    EXPECT_THROW(Contract::blend(Contract::linear(0.5), -0.1), InvalidContract);
    EXPECT_THROW(evaluate_contract(Contract::tabulated({0.0, 1.0, 2.0}), kTwo), AlignmentError);
}

TEST(Payoffs, AgentUtilityExamples) {
    EXPECT_DOUBLE_EQ(agent_utility(Contract::linear(0.5), two_point(2000, 500)), 500.0);
    EXPECT_DOUBLE_EQ(agent_utility(Contract::linear(0.7), null_action(kTwo)), 0.0);
    EXPECT_DOUBLE_EQ(agent_utility(Contract::linear(0.25), two_point(4000, 250)), 750.0);
}

TEST(Payoffs, PrincipalPayoffExamples) {
    EXPECT_DOUBLE_EQ(principal_payoff(Contract::linear(0.5), two_point(2000, 500)), 1000.0);
    EXPECT_DOUBLE_EQ(principal_payoff(Contract::linear(1.0), two_point(1234, 5)), 0.0);
    EXPECT_DOUBLE_EQ(principal_payoff(Contract::linear(0.25), two_point(4000, 0)), 3000.0);
}

TEST(ModelConfig, Invariants) {
    const Technology known({two_point(2000, 500)});
    EXPECT_NO_THROW(ModelConfig(kTwo, known, 0.8));
    EXPECT_THROW(ModelConfig(kTwo, known, 0.0), std::invalid_argument);
    EXPECT_THROW(ModelConfig(kTwo, known, INFINITY), std::invalid_argument);
    EXPECT_THROW(ModelConfig(kTwo, Technology({two_point(400, 500)}), 0.8), std::invalid_argument);
    EXPECT_THROW(Technology(std::vector<Action>{}), std::domain_error);
}

TEST(ActionWithMean, TwoPointSupport) {
    const OutputGrid g({0.0, 10.0, 20.0});
    const Action a = action_with_mean(g, 5.0, 1.0);
    EXPECT_DOUBLE_EQ(a.mean(), 5.0);
    EXPECT_DOUBLE_EQ(a.dist()[1], 0.0);
    EXPECT_THROW(action_with_mean(g, 25.0, 0.0), std::invalid_argument);
}

// Property tests over seeded random instances.

TEST(CoreProperties, AccountingIdentity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 300; ++it) {
        const OutputGrid g = oracle::random_grid(rng, 2 + it % 5);
        const Action a(oracle::random_dist(g, rng), 500.0 * u(rng));
        std::vector<double> pay(g.size(), 0.0);
        for (std::size_t i = 1; i < g.size(); ++i) pay[i] = 2.0 * u(rng) * g[i];
        for (const Contract& w : {Contract::tabulated(pay), Contract::linear(u(rng)),
                                  Contract::blend(Contract::tabulated(pay), 0.3 * u(rng))}) {
            const double lhs = agent_utility(w, a) + principal_payoff(w, a) + a.cost();
            EXPECT_NEAR(lhs, a.mean(), 1e-12 * (1.0 + a.mean()));
        }
    }
}

TEST(CoreProperties, BlendEndpoints) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        const OutputGrid g = oracle::random_grid(rng, 2 + it % 5);
        std::vector<double> pay(g.size(), 0.0);
        for (std::size_t i = 1; i < g.size(); ++i) pay[i] = u(rng) * g[i];
        const Contract base = Contract::tabulated(pay);
        EXPECT_EQ(evaluate_contract(Contract::blend(base, 0.0), g), pay);
        const auto full = evaluate_contract(Contract::blend(base, 1.0), g);
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(full[i], g[i]);
    }
}

TEST(CoreProperties, ExpectationIsLinear) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const OutputGrid g = oracle::random_grid(rng, 2 + it % 6);
        const Distribution d = oracle::random_dist(g, rng);
        std::vector<double> a(g.size()), b(g.size()), c(g.size());
        const double alpha = 10.0 * u(rng);
        for (std::size_t i = 0; i < g.size(); ++i) {
            a[i] = 1000.0 * u(rng);
            b[i] = 1000.0 * u(rng);
            c[i] = alpha * a[i] + b[i];
        }
        EXPECT_NEAR(expectation(d, c), alpha * expectation(d, a) + expectation(d, b), 1e-12 * 1e4);
    }
}
