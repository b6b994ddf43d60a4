#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "neurochoice/errors.hpp"
#include "neurochoice/rate_model.hpp"

using namespace neurochoice;

namespace
{
NeuronParams unit_neuron()
{
    // C = 1, g = 1, V^E = 0, V^B = 0.5, V^T = 1
    NeuronParams p;
    p.leak_conductance = 1.0;
    p.base_potential = 0.0;
    p.reset_potential = 0.5;
    p.threshold_potential = 1.0;
    return p;
}

struct Simulated
{
    double frequency;
    double mean_potential;
};

Simulated simulate_constant(const NeuronParams& p, double current)
{
    const double t = lif_period(p, current);
    SimulationOptions opt;
    opt.dt = t / 1000.0;
    opt.duration = 100.0 * t;
    opt.averaging_start = 10.0 * t;
    const SpikeRecord rec = simulate({{p}, {}, {ExternalCurrentProfile::constant(current)}, {}}, opt);
    const auto& s = rec.spike_times[0];
    // whole cycles after warm-up, so the average covers complete periods
    std::size_t first = 0;
    while (s[first] <= opt.averaging_start)
        ++first;
    const double isi = (s.back() - s[first]) / static_cast<double>(s.size() - 1 - first);
    SimulationOptions again = opt;
    again.averaging_start = s[first];
    again.duration = s.back();
    const SpikeRecord whole = simulate({{p}, {}, {ExternalCurrentProfile::constant(current)}, {}}, again);
    return {1.0 / isi, whole.mean_potential[0]};
}
} // namespace

TEST(ExpectedCurrent, Examples)
{
    EXPECT_EQ(expected_current(RateInput{2.0, {}}), 2.0);
    EXPECT_EQ(expected_current(RateInput{2.0, {{0.0, 0.7, 1.0}}}), 2.0);
    EXPECT_DOUBLE_EQ(expected_current(RateInput{0.0, {{10.0, 0.5, 0.0}}}), 5.0);
    EXPECT_DOUBLE_EQ(expected_current(RateInput{1.0, {{10.0, 0.5, 0.0}, {10.0, -0.3, 0.0}}}), 3.0);
}

TEST(ExpectedCurrent, ReadsHistoryAtDelayedTime)
{
    RateInput in{1.0, {{0.0, 2.0, 0.5}, {0.0, -1.0, 1.5}}};
    auto history = [](std::size_t h, double t) { return h == 0 ? t : 10.0 * t; };
    // 1 + 2 (3 - 0.5) - 1 * 10 (3 - 1.5)
    EXPECT_DOUBLE_EQ(expected_current(in, history, 3.0), 1.0 + 5.0 - 15.0);
}

TEST(FiCurve, Examples)
{
    const NeuronParams p = unit_neuron();
    EXPECT_EQ(fi_curve(p, 0.6, 0.6), 0.0);
    // C (V^T - V^B) = 2, excess current 3
    NeuronParams q;
    q.capacitance = 1.0;
    q.leak_conductance = 1.0;
    q.base_potential = -2.0;
    q.reset_potential = -1.0;
    q.threshold_potential = 1.0;
    EXPECT_DOUBLE_EQ(fi_curve(q, 3.0 + 1.0 * (0.0 - -2.0), 0.0), 1.5);
    EXPECT_THROW(fi_curve(q, 1.0, 2.0), PreconditionError);
    EXPECT_THROW(fi_curve(q, 1.0, -3.0), PreconditionError);
}

TEST(FiBounds, ZeroCurrentAndParallelLines)
{
    const NeuronParams p;
    const FrequencyBounds zero = fi_bounds(p, 0.0);
    EXPECT_EQ(zero.low, 0.0);
    EXPECT_EQ(zero.high, 0.0);
    const double alpha = derive_coefficients(p).alpha;
    for (double i : {3.0, 4.0, 7.5})
    {
        const FrequencyBounds b = fi_bounds(p, i);
        const FrequencyBounds b2 = fi_bounds(p, i + 1.0);
        EXPECT_NEAR(b2.low - b.low, alpha, 1e-14);
        EXPECT_NEAR(b2.high - b.high, alpha, 1e-14);
        EXPECT_LE(b.low, b.high);
    }
}

TEST(FiBounds, ContainFiCurveAboveMidPotential)
{
    const NeuronParams p;
    const double mid = 0.5 * (p.threshold_potential + p.reset_potential);
    for (double current : {0.0, 1.0, 1.5, 2.0, 3.0, 10.0})
        for (int k = 0; k <= 20; ++k)
        {
            const double v = mid + (p.threshold_potential - mid) * k / 20.0;
            const FrequencyBounds b = fi_bounds(p, current);
            const double f = fi_curve(p, current, v);
            EXPECT_LE(b.low, f + 1e-15);
            EXPECT_LE(f, b.high + 1e-15);
        }
}

TEST(DeriveCoefficients, Examples)
{
    NeuronParams p;
    p.base_potential = -2.0;
    p.reset_potential = -1.0;
    p.threshold_potential = 1.0;
    EXPECT_DOUBLE_EQ(derive_coefficients(p).alpha, 0.5);

    const NeuronParams u = unit_neuron();
    const RateCoefficients c = derive_coefficients(u);
    EXPECT_DOUBLE_EQ(c.beta_low, 0.75);
    EXPECT_DOUBLE_EQ(c.beta_high, 1.0);
    EXPECT_DOUBLE_EQ(c.beta, 0.875);
    EXPECT_DOUBLE_EQ(derive_coefficients(u, BetaPolicy::low).beta, 0.75);
    EXPECT_DOUBLE_EQ(derive_coefficients(u, BetaPolicy::high).beta, 1.0);
    EXPECT_EQ(parse_beta_policy("high"), BetaPolicy::high);
    EXPECT_THROW(parse_beta_policy("median"), PreconditionError);
}

TEST(RateResponse, Examples)
{
    RateCoefficients c{0.5, 1.0, 4.0, 3.0};
    EXPECT_EQ(rate_response(c, RateInput{2.9, {}}), 0.0);
    EXPECT_EQ(rate_response(c, RateInput{3.0, {}}), 0.0);
    EXPECT_DOUBLE_EQ(rate_response(c, RateInput{7.0, {}}), 2.0);
}

TEST(RateResponse, MonotoneInInputs)
{
    const RateCoefficients c = derive_coefficients(NeuronParams{});
    double prev = -1.0;
    for (double i = 0.0; i < 6.0; i += 0.25)
    {
        const double exc = rate_response(c, RateInput{i, {{1.0, 0.4, 0.0}, {2.0, -0.3, 0.0}}});
        EXPECT_GE(exc, prev);
        prev = exc;
        const double more_exc = rate_response(c, RateInput{i, {{1.5, 0.4, 0.0}, {2.0, -0.3, 0.0}}});
        const double more_inh = rate_response(c, RateInput{i, {{1.0, 0.4, 0.0}, {2.5, -0.3, 0.0}}});
        EXPECT_GE(more_exc, exc);
        EXPECT_LE(more_inh, exc);
    }
}

TEST(RateResponse, AffineAboveThreshold)
{
    const RateCoefficients c = derive_coefficients(NeuronParams{});
    const double i0 = c.beta + 0.3, i1 = c.beta + 1.3, i2 = c.beta + 2.3;
    const double f0 = rate_response(c, RateInput{i0, {}});
    const double f1 = rate_response(c, RateInput{i1, {}});
    const double f2 = rate_response(c, RateInput{i2, {}});
    EXPECT_NEAR(f1 - f0, c.alpha, 1e-14);
    EXPECT_NEAR(f2 - f1, c.alpha, 1e-14);
}

TEST(FatigueSchedule, RaisesBeta)
{
    const RateCoefficients base = derive_coefficients(NeuronParams{});
    const FatigueSchedule sched({{10.0, base.beta + 0.1}, {20.0, base.beta_high + 0.5}});
    EXPECT_EQ(sched.at(base, 5.0).beta, base.beta);
    EXPECT_EQ(sched.at(base, 15.0).beta, base.beta + 0.1);
    const RateCoefficients late = sched.at(base, 25.0);
    EXPECT_EQ(late.beta, base.beta_high + 0.5);
    EXPECT_NO_THROW(late.validate());
    EXPECT_THROW(FatigueSchedule({{1.0, 2.0}, {2.0, 1.0}}), PreconditionError);
}

TEST(SimulationOracle, FiCurveAtSimulatedMeanPotential)
{
    const NeuronParams p;
    for (double current : {2.2, 2.5, 3.0, 4.0, 6.0})
    {
        const Simulated s = simulate_constant(p, current);
        const double model = fi_curve(p, current, s.mean_potential);
        EXPECT_NEAR(s.frequency / model, 1.0, 0.02) << current;
    }
}

TEST(SimulationOracle, BoundsContainSimulatedFrequency)
{
    const NeuronParams p;
    for (int k = 1; k <= 20; ++k)
    {
        const double current = p.rheobase() * (1.0 + 0.1 * k);
        const Simulated s = simulate_constant(p, current);
        const FrequencyBounds b = fi_bounds(p, current);
        EXPECT_LE(b.low, s.frequency) << current;
        EXPECT_LE(s.frequency, b.high) << current;
    }
}

TEST(SimulationOracle, TwoLayerChainWithinBoundWidth)
{
    const NeuronParams p;
    const RateCoefficients c = derive_coefficients(p);
    const double drive = 4.0, pulse = 0.5, bias = 2.5;
    SpikingNetwork net{{p, p}, {{0, 1, 1.0, pulse, 0.5}},
                       {ExternalCurrentProfile::constant(drive), ExternalCurrentProfile::constant(bias)}, {}};
    SimulationOptions opt;
    opt.dt = 0.005;
    opt.duration = 3000.0;
    const SpikeRecord rec = simulate(net, opt);
    const FrequencyEstimate est = measure_frequency(rec, {300.0, opt.duration});

    const double f0 = rate_response(c, RateInput{drive, {}});
    const double f1 = rate_response(c, RateInput{bias, {{f0, pulse, 0.5}}});
    const double width = c.alpha * (c.beta_high - c.beta_low);
    EXPECT_NEAR(est.frequency[0], f0, width);
    EXPECT_NEAR(est.frequency[1], f1, width);
}
