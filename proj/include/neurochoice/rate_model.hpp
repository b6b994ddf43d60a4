#ifndef NEUROCHOICE_RATE_MODEL_HPP
#define NEUROCHOICE_RATE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "spiking.hpp"

// Frequency-domain description of a single neuron: expected input current,
// the f-I curve with its parallel bounds, and the rectified-linear response
// f = alpha [I - beta]_+ used by every network-level model.

namespace neurochoice
{

/// Slope and threshold of the rectified-linear response.
struct RateCoefficients
{
    double alpha = 1.0;      ///< 1 / (C (V^T - V^B))
    double beta_low = 0.0;   ///< g (0.5 (V^T + V^B) - V^E)
    double beta_high = 0.0;  ///< g (V^T - V^E)
    double beta = 0.0;       ///< working threshold, within [beta_low, beta_high]

    void validate() const
    {
        detail::require(std::isfinite(alpha) && alpha > 0.0, "RateCoefficients: alpha must be > 0");
        detail::require(beta_low > 0.0 && beta_low <= beta_high, "RateCoefficients: need 0 < beta_low <= beta_high");
        detail::require(beta >= beta_low && beta <= beta_high, "RateCoefficients: beta outside [beta_low, beta_high]");
    }

    RateCoefficients with_beta(double b) const
    {
        RateCoefficients c = *this;
        c.beta = b;
        c.validate();
        return c;
    }
};

enum class BetaPolicy
{
    low,
    midpoint,
    high
};

inline BetaPolicy parse_beta_policy(std::string_view s)
{
    if (s == "low")
        return BetaPolicy::low;
    if (s == "midpoint")
        return BetaPolicy::midpoint;
    if (s == "high")
        return BetaPolicy::high;
    throw PreconditionError("unknown beta policy '" + std::string(s) + "' (expected low, midpoint or high)");
}

inline RateCoefficients derive_coefficients(const NeuronParams& p, BetaPolicy policy = BetaPolicy::midpoint)
{
    p.validate();
    RateCoefficients c;
    c.alpha = 1.0 / (p.capacitance * p.reset_drop());
    c.beta_low = p.leak_conductance * (0.5 * (p.threshold_potential + p.reset_potential) - p.base_potential);
    c.beta_high = p.leak_conductance * (p.threshold_potential - p.base_potential);
    switch (policy)
    {
    case BetaPolicy::low:
        c.beta = c.beta_low;
        break;
    case BetaPolicy::high:
        c.beta = c.beta_high;
        break;
    case BetaPolicy::midpoint:
        c.beta = 0.5 * (c.beta_low + c.beta_high);
        break;
    }
    return c;
}

/**
 * Caller-supplied threshold fatigue: a non-decreasing, piecewise-constant
 * schedule of beta over time. Before the first breakpoint the coefficients'
 * own beta applies. A fatigued threshold may exceed the rest-state interval,
 * so the returned coefficients widen beta_high to keep the invariant.
 */
class FatigueSchedule
{
public:
    struct Breakpoint
    {
        double time;
        double beta;
    };

    FatigueSchedule() = default;
    explicit FatigueSchedule(std::vector<Breakpoint> points) : points_(std::move(points))
    {
        for (std::size_t k = 1; k < points_.size(); ++k)
        {
            detail::require(points_[k].time > points_[k - 1].time, "FatigueSchedule: times must increase");
            detail::require(points_[k].beta >= points_[k - 1].beta, "FatigueSchedule: beta must be non-decreasing");
        }
    }

    RateCoefficients at(const RateCoefficients& base, double t) const
    {
        RateCoefficients c = base;
        auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double v, const Breakpoint& b) { return v < b.time; });
        if (it != points_.begin())
        {
            const double b = std::prev(it)->beta;
            detail::require(b >= base.beta, "FatigueSchedule: fatigue cannot lower beta below its rest value");
            c.beta = b;
            c.beta_high = std::max(c.beta_high, b);
        }
        return c;
    }

private:
    std::vector<Breakpoint> points_;
};

struct UpstreamInput
{
    double frequency = 0.0;        ///< f_h >= 0
    double induced_current = 0.0;  ///< A_hi, negative for inhibition
    double delay = 0.0;            ///< eps_hi
};

struct RateInput
{
    double external_current = 0.0;
    std::vector<UpstreamInput> upstream;

    void validate() const
    {
        detail::require(std::isfinite(external_current), "RateInput: external current must be finite");
        for (const auto& u : upstream)
        {
            detail::require(std::isfinite(u.frequency) && u.frequency >= 0.0,
                            "RateInput: upstream frequencies must be >= 0");
            detail::require(std::isfinite(u.induced_current), "RateInput: induced current must be finite");
            detail::require(u.delay >= 0.0, "RateInput: delays must be >= 0");
        }
    }
};

/// History of upstream activity: history(h, time) is f_h at that time.
template <typename H>
concept FrequencyHistory = requires(const H& h, std::size_t i, double t) {
    { h(i, t) } -> std::convertible_to<double>;
};

/// Expected current with every upstream neuron at its stored steady frequency.
inline double expected_current(const RateInput& in)
{
    double current = in.external_current;
    for (const auto& u : in.upstream)
        current += u.induced_current * u.frequency;
    return current;
}

/// Expected current at time t, reading each upstream frequency at t - eps_hi.
template <FrequencyHistory H>
double expected_current(const RateInput& in, const H& history, double t)
{
    double current = in.external_current;
    for (std::size_t h = 0; h < in.upstream.size(); ++h)
        current += in.upstream[h].induced_current * static_cast<double>(history(h, t - in.upstream[h].delay));
    return current;
}

/// f-I curve [(I - g (V - V^E)) / (C (V^T - V^B))]_+ given the time-averaged potential.
inline double fi_curve(const NeuronParams& p, double mean_current, double mean_potential)
{
    p.validate();
    detail::require(mean_potential >= p.base_potential && mean_potential <= p.threshold_potential,
                    "fi_curve: mean potential outside [base, threshold]");
    return rectify((mean_current - p.leak_conductance * (mean_potential - p.base_potential)) /
                   (p.capacitance * p.reset_drop()));
}

struct FrequencyBounds
{
    double low;
    double high;
};

/// Parallel lines bounding the f-I curve, independent of the mean potential.
inline FrequencyBounds fi_bounds(const NeuronParams& p, double mean_current)
{
    const RateCoefficients c = derive_coefficients(p);
    return {c.alpha * rectify(mean_current - c.beta_high), c.alpha * rectify(mean_current - c.beta_low)};
}

inline double rate_response(const RateCoefficients& c, const RateInput& in)
{
    return c.alpha * rectify(expected_current(in) - c.beta);
}

template <FrequencyHistory H>
double rate_response(const RateCoefficients& c, const RateInput& in, const H& history, double t)
{
    return c.alpha * rectify(expected_current(in, history, t) - c.beta);
}

} // namespace neurochoice

#endif // NEUROCHOICE_RATE_MODEL_HPP
