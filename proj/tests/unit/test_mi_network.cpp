#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "neurochoice/errors.hpp"
#include "neurochoice/mi_network.hpp"

using namespace neurochoice;

namespace
{
MINetwork pair(double u_i, double u_j, double k_ij, double k_ji)
{
    MINetwork net;
    net.uninhibited = {u_i, u_j};
    net.inhibition = SquareMatrix(2, 0.0);
    net.inhibition(0, 1) = k_ij;
    net.inhibition(1, 0) = k_ji;
    return net;
}

bool contains(const std::vector<SteadyState>& states, const std::vector<double>& f, double tol)
{
    for (const auto& s : states)
        if (detail::same_state(s.f, f, tol))
            return true;
    return false;
}
} // namespace

TEST(UninhibitedFrequency, Examples)
{
    RateCoefficients c{1.0, 1.0, 3.0, 2.0};
    EXPECT_DOUBLE_EQ(uninhibited_frequency(c, RateInput{0.0, {}}), -2.0);
    RateCoefficients d{2.0, 1.0, 4.0, 3.0};
    EXPECT_DOUBLE_EQ(uninhibited_frequency(d, RateInput{5.0, {}}), 4.0);
    // with no rival firing the response is the rectified uninhibited frequency
    for (double i : {0.0, 2.0, 3.5, 8.0})
        EXPECT_DOUBLE_EQ(rate_response(d, RateInput{i, {}}), rectify(uninhibited_frequency(d, RateInput{i, {}})));
}

TEST(RelativeInhibition, Examples)
{
    RateCoefficients c{0.5, 1.0, 2.0, 1.5};
    EXPECT_DOUBLE_EQ(relative_inhibition(c, Synapse{0, 1, 1.0, -2.0, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(relative_inhibition(c, Synapse{0, 1, 2.0, -2.0, 1.0}), 2.0);
    EXPECT_DOUBLE_EQ(relative_inhibition(c, Synapse{0, 1, 0.5, -2.0, 1.0}), 0.5);
    EXPECT_THROW(relative_inhibition(c, Synapse{0, 1, 1.0, 2.0, 1.0}), PreconditionError);
}

TEST(MINetwork, Validation)
{
    MINetwork net = MINetwork::central({1.0, 2.0});
    EXPECT_TRUE(net.central_case());
    EXPECT_NO_THROW(net.validate());
    net.inhibition(0, 0) = 0.5;
    EXPECT_THROW(net.validate(), PreconditionError);
    net = pair(1.0, 1.0, -0.1, 1.0);
    EXPECT_THROW(net.validate(), PreconditionError);
    EXPECT_FALSE(pair(1.0, 1.0, 0.5, 1.0).central_case());
}

TEST(SolveSteadyState, CentralExample)
{
    const SteadyStateReport r = solve_steady_state(MINetwork::central({3.0, 5.0, 2.0}));
    ASSERT_EQ(r.states.size(), 1u);
    EXPECT_EQ(r.primary().f, (std::vector<double>{0.0, 5.0, 0.0}));
    EXPECT_LE(r.primary().residual, 1e-12);
}

TEST(SolveSteadyState, ClosedFormPair)
{
    const SteadyStateReport r = solve_steady_state(pair(0.8, 1.0, 0.5, 0.5));
    ASSERT_EQ(r.states.size(), 1u);
    EXPECT_NEAR(r.primary().f[0], 0.4, 1e-12);
    EXPECT_NEAR(r.primary().f[1], 0.8, 1e-12);
}

TEST(SolveSteadyState, AllNegativeIsSilent)
{
    const SteadyStateReport r = solve_steady_state(MINetwork::central({-1.0, -0.5, 0.0, -3.0}));
    EXPECT_EQ(r.primary().f, std::vector<double>(4, 0.0));
    EXPECT_EQ(r.primary().active_count(), 0u);
}

TEST(SolveSteadyState, StrongInhibitionHasTwoStates)
{
    // k_ij k_ji > 1: each neuron alone is a steady state
    const SteadyStateReport r = solve_steady_state(pair(1.0, 1.0, 2.0, 2.0));
    EXPECT_TRUE(r.multiple());
    EXPECT_TRUE(contains(r.states, {1.0, 0.0}, 1e-12));
    EXPECT_TRUE(contains(r.states, {0.0, 1.0}, 1e-12));
    for (const auto& s : r.states)
        EXPECT_LE(s.residual, 1e-9);
}

TEST(SolveSteadyState, RejectsBadTolerance)
{
    EXPECT_THROW(solve_steady_state(MINetwork::central({1.0}), 0.0), PreconditionError);
}

TEST(SolveSteadyState, IterationAnswerIsEnumerated)
{
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    std::uniform_real_distribution<double> k(0.0, 1.5);
    std::uniform_int_distribution<int> size(2, 3);
    int checked = 0;
    for (int draw = 0; draw < 1000; ++draw)
    {
        const auto n = static_cast<std::size_t>(size(gen));
        MINetwork net;
        for (std::size_t i = 0; i < n; ++i)
            net.uninhibited.push_back(u(gen));
        net.inhibition = SquareMatrix(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (i != j)
                    net.inhibition(j, i) = k(gen);
        const IterationResult it = iterate_steady_state(net, 1e-12, 200000);
        if (!it.converged)
            continue;  // oscillating draws are covered by the enumeration fallback
        ++checked;
        const EnumerationResult all = enumerate_steady_states(net, 1e-12);
        EXPECT_TRUE(contains(all.states, it.f, 1e-8)) << "draw " << draw;
        for (const auto& s : all.states)
            EXPECT_LE(steady_state_residual(net, s.f), 1e-9);
    }
    EXPECT_GT(checked, 900);
}

TEST(SolveSteadyState, LargerCentralNetworksMatchRule)
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 5.0);
    for (std::size_t n : {5u, 8u, 10u})
    {
        std::vector<double> values(n);
        for (auto& v : values)
            v = u(gen);
        const SteadyStateReport r = solve_steady_state(MINetwork::central(values));
        const CentralChoice c = central_case_choice(values);
        if (const auto* w = std::get_if<Winner>(&c))
        {
            EXPECT_EQ(argmax(std::span<const double>(r.primary().f)), w->index);
            EXPECT_NEAR(r.primary().f[w->index], w->frequency, 1e-9);
            EXPECT_EQ(r.primary().active_count(), 1u);
        }
        else
            EXPECT_EQ(r.primary().active_count(), 0u);
    }
}

TEST(SolveSteadyState, ScalingUAndFScalesTogether)
{
    const MINetwork a = pair(0.8, 1.0, 0.3, 0.6);
    MINetwork b = a;
    for (double& v : b.uninhibited)
        v *= 3.0;
    const auto fa = solve_steady_state(a).primary().f;
    const auto fb = solve_steady_state(b).primary().f;
    EXPECT_NEAR(fb[0], 3.0 * fa[0], 1e-12);
    EXPECT_NEAR(fb[1], 3.0 * fa[1], 1e-12);
}

TEST(CentralCaseChoice, Examples)
{
    const std::vector<double> none{-1.0, -3.0};
    const CentralChoice c = central_case_choice(none);
    ASSERT_TRUE(std::holds_alternative<Inaction>(c));
    EXPECT_EQ(std::get<Inaction>(c).best_value, -1.0);

    const std::vector<double> three{3.0, 5.0, 2.0};
    const CentralChoice w = central_case_choice(three);
    ASSERT_TRUE(std::holds_alternative<Winner>(w));
    EXPECT_EQ(std::get<Winner>(w).index, 1u);
    EXPECT_EQ(std::get<Winner>(w).frequency, 5.0);
    EXPECT_EQ(mechanism_output(three), 5.0);
    EXPECT_EQ(mechanism_output(none), 0.0);

    const std::vector<double> tie{4.0, 4.0};
    EXPECT_THROW(central_case_choice(tie), TieError);
    // a tie among non-positive values is still inaction
    const std::vector<double> quiet{0.0, 0.0};
    EXPECT_TRUE(std::holds_alternative<Inaction>(central_case_choice(quiet)));
}

TEST(LoserWins, Examples)
{
    const RegimeExample ex = loser_wins_example(2.0);
    EXPECT_DOUBLE_EQ(ex.network.uninhibited[0], 0.75);
    EXPECT_DOUBLE_EQ(ex.network.uninhibited[1], 1.0);
    EXPECT_EQ(ex.expected.f, (std::vector<double>{0.75, 0.0}));
    EXPECT_LE(ex.expected.residual, 1e-15);

    const RegimeExample near = loser_wins_example(1.01);
    EXPECT_GT(near.network.uninhibited[0], 1.0 / 1.01);
    EXPECT_LT(near.network.uninhibited[0], 1.0);
    EXPECT_LE(near.expected.residual, 1e-12);

    // the interval tends to (0, U_j) as k_ij grows
    EXPECT_NEAR(loser_wins_example(1e9).network.uninhibited[0], 0.5, 1e-8);
    EXPECT_THROW(loser_wins_example(1.0), PreconditionError);
}

TEST(ParallelActivity, Examples)
{
    const RegimeExample ex = parallel_activity_example(0.5, 0.5);
    EXPECT_DOUBLE_EQ(ex.network.uninhibited[0], 0.75);
    EXPECT_NEAR(ex.expected.f[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(ex.expected.f[1], 5.0 / 6.0, 1e-15);
    EXPECT_LE(ex.expected.residual, 1e-15);

    const RegimeExample free = parallel_activity_example(0.0, 0.5);
    EXPECT_DOUBLE_EQ(free.expected.f[1], 1.0);

    // close to the singular boundary k_ij k_ji = 1 the closed form still solves the system
    const RegimeExample edge = parallel_activity_example(0.999, 0.999);
    EXPECT_LE(edge.expected.residual, 1e-12);
    EXPECT_EQ(edge.expected.active_count(), 2u);
    EXPECT_THROW(parallel_activity_example(0.5, 1.0), PreconditionError);
    EXPECT_THROW(parallel_activity_example(1.0, 0.5), PreconditionError);
}

TEST(Regimes, ConstructedStatesAreFoundBySolver)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> big(1.05, 6.0);
    std::uniform_real_distribution<double> small(0.0, 0.95);
    for (int k = 0; k < 100; ++k)
    {
        const RegimeExample lw = loser_wins_example(big(gen));
        const SteadyStateReport r = solve_steady_state(lw.network);
        EXPECT_TRUE(contains(r.states, lw.expected.f, 1e-9));

        const RegimeExample pa = parallel_activity_example(small(gen), small(gen));
        const SteadyStateReport q = solve_steady_state(pa.network);
        EXPECT_TRUE(contains(q.states, pa.expected.f, 1e-9));
        EXPECT_EQ(pa.expected.active_count(), 2u);
    }
}
