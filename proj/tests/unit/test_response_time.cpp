#include <cmath>
#include <random>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "neurochoice/errors.hpp"
#include "neurochoice/response_time.hpp"

using namespace neurochoice;
using Rational = boost::multiprecision::cpp_rational;

namespace
{
TransitionScenario<double> basic(double u1, double u2, double s = 0.0)
{
    TransitionScenario<double> sc;
    sc.incumbent = u1;
    sc.challenger = u2;
    sc.challenger_before = 0.0;
    sc.processing_delay = s;
    return sc;
}
} // namespace

TEST(ResponseTime, UnitGapExample)
{
    const auto sc = basic(1.0, 2.0);
    const auto tr = simulate_transition(sc);
    EXPECT_EQ(tr.challenger_grid, (std::vector<double>{0.0, 1.0, 2.0, 2.0}));
    EXPECT_EQ(tr.cycles, 2u);
    EXPECT_EQ(tr.settle_time, 4.0);

    const auto p = predict_response_time(sc);
    EXPECT_EQ(p.lower, 4.0);
    EXPECT_EQ(p.upper, 6.0);
    EXPECT_EQ(p.cycles, 2);
}

TEST(ResponseTime, ProcessingDelayShiftsEverything)
{
    const auto a = predict_response_time(basic(1.0, 2.0));
    const auto b = predict_response_time(basic(1.0, 2.0, 5.0));
    EXPECT_EQ(b.lower - a.lower, 5.0);
    EXPECT_EQ(b.upper - a.upper, 5.0);
    EXPECT_EQ(simulate_transition(basic(1.0, 2.0, 5.0)).settle_time, 9.0);
}

TEST(ResponseTime, OverwhelmingChallenger)
{
    const auto sc = basic(1.0, 100.0);
    const auto p = predict_response_time(sc);
    EXPECT_EQ(p.cycles, 1);
    // the first cycle leaves f2 = U2 - U1; neuron 2 reaches U2 once neuron 1 is silenced
    const auto tr = simulate_transition(sc);
    EXPECT_EQ(tr.challenger_grid[1], 99.0);
    EXPECT_GE(tr.settle_time, p.lower);
    EXPECT_LT(tr.settle_time, p.upper);
}

TEST(ResponseTime, Preconditions)
{
    EXPECT_THROW(predict_response_time(basic(1.0, 1.0)), PreconditionError);
    EXPECT_THROW(simulate_transition(basic(2.0, 1.0)), PreconditionError);
    auto sc = basic(1.0, 2.0);
    sc.challenger_before = 1.5;
    EXPECT_THROW(sc.validate(), PreconditionError);
    sc = basic(1.0, 2.0);
    sc.lag_12 = 0.0;
    EXPECT_THROW(sc.validate(), PreconditionError);
}

TEST(ResponseTime, CloseRacesAreSlow)
{
    double prev = 0.0;
    for (double gap : {1.0, 0.1, 0.01, 0.001})
    {
        const double lower = predict_response_time(basic(1.0, 1.0 + gap)).lower;
        EXPECT_GT(lower, prev);
        prev = lower;
    }
    EXPECT_GT(prev, 2000.0);
}

TEST(ResponseTime, LowerBoundNonIncreasingInChallenger)
{
    double prev = std::numeric_limits<double>::infinity();
    for (double u2 = 1.05; u2 < 20.0; u2 += 0.25)
    {
        const double lower = predict_response_time(basic(1.0, u2)).lower;
        EXPECT_LE(lower, prev);
        prev = lower;
    }
}

TEST(ResponseTime, ExactRationalIncrementsAndBracket)
{
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> num(1, 40);
    std::uniform_int_distribution<int> den(1, 12);
    for (int draw = 0; draw < 200; ++draw)
    {
        TransitionScenario<Rational> sc;
        sc.incumbent = Rational(num(gen), den(gen));
        sc.challenger = sc.incumbent + Rational(num(gen), den(gen) * 3);
        sc.challenger_before = sc.incumbent - Rational(1, den(gen));
        sc.processing_delay = Rational(num(gen) - 1, den(gen));
        sc.lag_12 = Rational(num(gen), den(gen));
        sc.lag_21 = Rational(num(gen), den(gen));

        const auto tr = simulate_transition(sc);
        const auto p = predict_response_time(sc);
        const Rational gap = sc.challenger - sc.incumbent;
        for (std::size_t k = 0; k + 1 < tr.challenger_grid.size(); ++k)
        {
            if (tr.challenger_grid[k] < sc.incumbent)
            {
                ASSERT_EQ(tr.challenger_grid[k + 1] - tr.challenger_grid[k], gap) << "draw " << draw;
            }
        }
        ASSERT_GE(tr.settle_time, p.lower) << "draw " << draw;
        ASSERT_LT(tr.settle_time, p.upper) << "draw " << draw;
        for (const auto& s : tr.samples)
            ASSERT_TRUE(s.f1 >= 0 && s.f2 >= 0);
        // the final state is the central-case winner
        const auto& last = tr.samples.back();
        EXPECT_EQ(last.f1, 0);
        EXPECT_EQ(last.f2, sc.challenger);
    }
}

TEST(ResponseTime, FinalStateMatchesCentralRule)
{
    const auto sc = basic(3.0, 4.0, 1.0);
    const auto tr = simulate_transition(sc);
    const std::vector<double> u{sc.incumbent, sc.challenger};
    const auto w = std::get<Winner>(central_case_choice(u));
    EXPECT_EQ(w.index, 1u);
    EXPECT_EQ(tr.samples.back().f2, w.frequency);
    EXPECT_EQ(tr.samples.back().f1, 0.0);
    EXPECT_EQ(tr.settle_time, 9.0);
}

TEST(ResponseTime, TwoPhaseSwapsBack)
{
    const auto sc = basic(1.0, 2.0);
    const TwoPhaseResult r = simulate_two_phase(sc, SlowPhase{3.0, 1.0}, 0.0);
    EXPECT_EQ(r.first.settle_time, 4.0);
    EXPECT_GE(r.second.settle_time, r.second_prediction.lower);
    EXPECT_LT(r.second.settle_time, r.second_prediction.upper);
    EXPECT_EQ(r.second.samples.back().f1, 3.0);
    EXPECT_EQ(r.second.samples.back().f2, 0.0);
    EXPECT_THROW(simulate_two_phase(sc, SlowPhase{1.5, 1.0}, 0.0), PreconditionError);
}

TEST(DelayedNetwork, AgreesWithTransitionRecursion)
{
    MINetwork net = MINetwork::central({1.0, 2.0});
    net.lags = SquareMatrix(2, 1.0);
    const DelayedTrace tr = simulate_delayed_network(net, {1.0, 0.0}, 50.0);
    EXPECT_TRUE(tr.settled);
    EXPECT_EQ(tr.final_f, (std::vector<double>{0.0, 2.0}));
    // f2 steps 0 -> 1 -> 2 on the cycle grid
    ASSERT_GE(tr.history[1].size(), 3u);
    EXPECT_EQ(tr.history[1][1].value, 1.0);
    EXPECT_EQ(tr.history[1][2].value, 2.0);
}
