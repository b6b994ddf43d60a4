#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "neurochoice/errors.hpp"
#include "neurochoice/neural_utility.hpp"

using namespace neurochoice;

namespace
{
RateCoefficients coeffs(double alpha, double beta)
{
    return {alpha, beta * 0.5, beta * 2.0, beta};
}

DecisionProblem two_action_problem(double phi)
{
    // expected utilities 0.5 and 0.3 with theta = 1
    DecisionProblem pr;
    pr.processes = {"deliberative"};
    pr.actions = {"left", "right"};
    pr.states = 2;
    pr.consequence = {{0, 1}, {2, 3}};
    pr.utility = {{1.0, 0.0, 0.6, 0.0}};
    pr.assessment = {{{1.0, phi, {0.5, 0.5}}, {1.0, phi, {0.5, 0.5}}}};
    return pr;
}
} // namespace

TEST(Relabel, SingleExcitatoryInput)
{
    const auto c = coeffs(0.5, 2.0);
    const NeuralUtilityTerms t = relabel({4.0}, {{3.0}}, {c});
    ASSERT_EQ(t.neurons.size(), 1u);
    EXPECT_EQ(t.neurons[0].pi, std::vector<double>{1.0});
    EXPECT_EQ(t.neurons[0].u, std::vector<double>{4.0});
    EXPECT_DOUBLE_EQ(recombine(t.neurons[0]), 0.5 * (3.0 * 4.0 - 2.0));
}

TEST(Relabel, CancellingInputsLeaveOnlyCost)
{
    const auto c = coeffs(0.5, 2.0);
    const NeuralUtilityTerms t = relabel({5.0, 5.0}, {{1.0}, {-1.0}}, {c});
    EXPECT_EQ(t.neurons[0].pi, (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(t.neurons[0].u, (std::vector<double>{5.0, -5.0}));
    EXPECT_DOUBLE_EQ(recombine(t.neurons[0]), -t.neurons[0].phi);
    EXPECT_LT(recombine(t.neurons[0]), 0.0);
}

TEST(Relabel, Preconditions)
{
    const auto c = coeffs(0.5, 2.0);
    EXPECT_THROW(relabel({1.0, 2.0}, {{0.0, 1.0}, {0.0, 2.0}}, {c, c}), PreconditionError);
    EXPECT_THROW(relabel({-1.0}, {{1.0}}, {c}), PreconditionError);
    EXPECT_THROW(relabel({1.0}, {{1.0, 1.0}}, {c}), PreconditionError);
}

TEST(Relabel, ReconstructsUninhibitedFrequency)
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> freq(0.0, 50.0);
    std::uniform_real_distribution<double> cur(-3.0, 3.0);
    std::uniform_real_distribution<double> alpha(0.01, 2.0);
    std::uniform_real_distribution<double> beta(0.1, 5.0);
    for (int draw = 0; draw < 1000; ++draw)
    {
        const std::size_t h_count = 3, n = 4;
        std::vector<double> f(h_count);
        for (auto& v : f)
            v = freq(gen);
        std::vector<std::vector<double>> a(h_count, std::vector<double>(n));
        for (auto& row : a)
            for (auto& v : row)
                v = cur(gen);
        std::vector<RateCoefficients> cs;
        for (std::size_t i = 0; i < n; ++i)
            cs.push_back(coeffs(alpha(gen), beta(gen)));

        const NeuralUtilityTerms t = relabel(f, a, cs);
        const std::vector<double> u = recombine(t);
        for (std::size_t i = 0; i < n; ++i)
        {
            RateInput in;
            for (std::size_t h = 0; h < h_count; ++h)
                in.upstream.push_back({f[h], a[h][i], 0.0});
            const double direct = uninhibited_frequency(cs[i], in);
            ASSERT_NEAR(u[i], direct, 1e-12 * std::max(1.0, std::abs(direct))) << "draw " << draw;
            double total = 0.0;
            for (double p : t.neurons[i].pi)
            {
                EXPECT_GE(p, 0.0);
                EXPECT_LE(p, 1.0);
                total += p;
            }
            EXPECT_NEAR(total, 1.0, 1e-15);
            EXPECT_GT(t.neurons[i].theta, 0.0);
            EXPECT_GT(t.neurons[i].phi, 0.0);
        }
    }
}

TEST(NuDecide, Examples)
{
    const Decision d = nu_decide(two_action_problem(0.1));
    ASSERT_TRUE(std::holds_alternative<Chosen>(d));
    EXPECT_EQ(std::get<Chosen>(d).action, 0u);
    EXPECT_NEAR(std::get<Chosen>(d).value, 0.4, 1e-15);

    const Decision none = nu_decide(two_action_problem(0.6));
    ASSERT_TRUE(std::holds_alternative<Inaction>(none));
    EXPECT_NEAR(std::get<Inaction>(none).best_value, -0.1, 1e-15);
}

TEST(NuDecide, SecondProcessCanOverrule)
{
    DecisionProblem pr = two_action_problem(0.1);
    pr.processes.push_back("habitual");
    pr.utility.push_back({0.0, 0.0, 2.0, 2.0});
    pr.assessment.push_back({{1.0, 0.1, {0.5, 0.5}}, {1.0, 0.1, {0.5, 0.5}}});
    const auto c = std::get<Chosen>(nu_decide(pr));
    EXPECT_EQ(c.process, 1u);
    EXPECT_EQ(c.action, 1u);
    EXPECT_NEAR(c.value, 1.9, 1e-15);
}

TEST(NuDecide, TiesAndValidation)
{
    DecisionProblem pr = two_action_problem(0.1);
    pr.utility[0][2] = 1.0;
    EXPECT_THROW(nu_decide(pr), TieError);
    pr = two_action_problem(0.1);
    pr.assessment[0][0].probabilities = {0.7, 0.7};
    EXPECT_THROW(nu_decide(pr), PreconditionError);
    pr = two_action_problem(0.1);
    pr.actions.clear();
    EXPECT_THROW(nu_decide(pr), PreconditionError);
}

TEST(NuDecide, InvariantUnderRenaming)
{
    DecisionProblem a = two_action_problem(0.1);
    DecisionProblem b = a;
    b.actions = {"x", "y"};
    b.processes = {"other"};
    EXPECT_EQ(std::get<Chosen>(nu_decide(a)).action, std::get<Chosen>(nu_decide(b)).action);
}

TEST(NuDecide, FatigueRaisesCost)
{
    const auto rest = relabel({5.0}, {{1.0}}, {coeffs(0.5, 4.0)});
    const auto tired = relabel({5.0}, {{1.0}}, {coeffs(0.5, 4.5)});
    EXPECT_GT(tired.neurons[0].phi, rest.neurons[0].phi);
    EXPECT_TRUE(std::holds_alternative<Chosen>(nu_decide(problem_from_terms(rest))));
    const auto exhausted = relabel({5.0}, {{1.0}}, {coeffs(0.5, 5.5)});
    EXPECT_TRUE(std::holds_alternative<Inaction>(nu_decide(problem_from_terms(exhausted))));
}

TEST(Consistency, CentralExampleThroughRelabel)
{
    // one review neuron per MI neuron, A = 1, alpha = 1: U_i = f_i - beta_i
    const std::vector<double> f{4.0, 6.0, 3.0};
    const std::vector<std::vector<double>> a{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    const std::vector<RateCoefficients> cs(3, coeffs(1.0, 1.0));
    const NeuralUtilityTerms t = relabel(f, a, cs);
    EXPECT_EQ(recombine(t), (std::vector<double>{3.0, 5.0, 2.0}));
    EXPECT_TRUE(consistency_check(t));
    const auto c = std::get<Chosen>(nu_decide(problem_from_terms(t)));
    EXPECT_EQ(c.action, 1u);
    EXPECT_DOUBLE_EQ(c.value, 5.0);

    const NeuralUtilityTerms quiet = relabel({0.5, 0.2, 0.1}, a, cs);
    EXPECT_TRUE(consistency_check(quiet));
    EXPECT_TRUE(std::holds_alternative<Inaction>(nu_decide(problem_from_terms(quiet))));
}

TEST(Consistency, ScalingCurrentsKeepsWinner)
{
    const std::vector<double> f{4.0, 6.0};
    const std::vector<std::vector<double>> a{{1.0, 0.4}, {0.2, 1.0}};
    const std::vector<RateCoefficients> cs(2, coeffs(1.0, 0.5));
    const auto base = std::get<Chosen>(nu_decide(problem_from_terms(relabel(f, a, cs))));
    for (double scale : {0.5, 2.0, 10.0})
    {
        auto scaled = a;
        for (auto& row : scaled)
            for (auto& v : row)
                v *= scale;
        const auto t = relabel(f, scaled, cs);
        EXPECT_TRUE(consistency_check(t));
        EXPECT_EQ(std::get<Chosen>(nu_decide(problem_from_terms(t))).action, base.action);
    }
}
