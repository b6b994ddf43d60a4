#ifndef NEUROCHOICE_RESPONSE_TIME_HPP
#define NEUROCHOICE_RESPONSE_TIME_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "mi_network.hpp"
#include "numeric.hpp"

namespace neurochoice
{

/**
 * Two-neuron shock in the central case. Neuron 1 holds the incumbent
 * frequency U1; at time processing_delay the challenger's uninhibited
 * frequency jumps from challenger_before (< U1) to challenger (> U1).
 *
 * Scalar is double in normal use; exact rational types work as well, which
 * lets the recursion be checked without rounding.
 */
template <typename Scalar = double>
struct TransitionScenario
{
    Scalar incumbent{};          ///< U1 > 0
    Scalar challenger{};         ///< U2 > U1
    Scalar challenger_before{};  ///< U2 before the shock, < U1
    Scalar processing_delay{};   ///< eps_0 >= 0
    Scalar lag_12{1};            ///< neuron 1 -> neuron 2
    Scalar lag_21{1};            ///< neuron 2 -> neuron 1

    void validate() const
    {
        detail::require(incumbent > Scalar(0), "transition: requires U1 > 0");
        detail::require(challenger > incumbent, "transition: requires U2 > U1 (the challenger must be competitive)");
        detail::require(challenger_before < incumbent, "transition: requires pre-shock U2 < U1");
        detail::require(processing_delay >= Scalar(0), "transition: processing delay must be >= 0");
        detail::require(lag_12 > Scalar(0) && lag_21 > Scalar(0), "transition: lags must be > 0");
    }

    Scalar cycle() const { return lag_12 + lag_21; }
};

template <typename Scalar = double>
struct TransitionSample
{
    Scalar time;
    Scalar f1;
    Scalar f2;
};

template <typename Scalar = double>
struct DynamicsTrace
{
    std::vector<TransitionSample<Scalar>> samples;
    /// Neuron 2's value on the k-th grid point processing_delay + k (lag_12 + lag_21).
    std::vector<Scalar> challenger_grid;
    Scalar settle_time{};
    std::size_t cycles = 0;  ///< full cycles until neuron 2 reached U2
};

namespace detail
{
template <typename Scalar>
Scalar rect(const Scalar& x)
{
    return x > Scalar(0) ? x : Scalar(0);
}

template <typename Scalar>
bool within(const Scalar& a, const Scalar& b, const Scalar& tol)
{
    const Scalar d = a > b ? a - b : b - a;
    return d <= tol;
}
} // namespace detail

/**
 * Exact evaluation of the delayed two-neuron recursion
 *   f1(t) = [U1 - f2(t - lag_21)]_+,   f2(t) = [U2 - f1(t - lag_12)]_+
 * on the event grid it generates. With s = processing_delay and
 * c = lag_12 + lag_21, neuron 2 changes only at s + k c and neuron 1 only at
 * s + lag_21 + k c; both signals are constant in between. The initial
 * condition f2 = 0, f1 = U1 at s holds over the first cycle, so neuron 2 gains
 * U2 - U1 per full cycle while both neurons are active.
 *
 * Settled means both frequencies are within tol of the new steady state
 * (0, U2) and stay there over a further full cycle.
 */
template <typename Scalar = double>
DynamicsTrace<Scalar> simulate_transition(const TransitionScenario<Scalar>& sc, Scalar tol = Scalar(0),
                                          std::size_t max_cycles = 10'000'000)
{
    sc.validate();
    detail::require(tol >= Scalar(0), "simulate_transition: tol must be >= 0");

    const Scalar s = sc.processing_delay;
    const Scalar c = sc.cycle();
    const Scalar u1 = sc.incumbent;
    const Scalar u2 = sc.challenger;

    DynamicsTrace<Scalar> tr;
    if (s > Scalar(0))
        tr.samples.push_back({Scalar(0), u1, detail::rect<Scalar>(sc.challenger_before - u1)});

    Scalar f1 = u1;
    Scalar f2 = Scalar(0);
    tr.samples.push_back({s, f1, f2});
    tr.challenger_grid.push_back(f2);

    auto settled = [&]() { return detail::within<Scalar>(f1, Scalar(0), tol) && detail::within<Scalar>(f2, u2, tol); };
    // start of the current unbroken run of settled samples
    std::optional<Scalar> run_start;
    std::size_t run_cycles = 0;

    for (std::size_t k = 0; k < max_cycles; ++k)
    {
        const Scalar base = s + Scalar(static_cast<long long>(k)) * c;
        f1 = detail::rect<Scalar>(u1 - f2);
        tr.samples.push_back({base + sc.lag_21, f1, f2});
        if (!settled())
            run_start.reset();

        f2 = detail::rect<Scalar>(u2 - f1);
        tr.samples.push_back({base + c, f1, f2});
        tr.challenger_grid.push_back(f2);
        if (!settled())
        {
            run_start.reset();
        }
        else if (!run_start)
        {
            // neuron 2 can only reach U2 on its own grid point
            run_start = base + c;
            run_cycles = k + 1;
        }
        else if (k + 1 >= run_cycles + 1)
        {
            tr.settle_time = *run_start;
            tr.cycles = run_cycles;
            return tr;
        }
    }
    throw NumericalError("simulate_transition: did not settle within the cycle budget");
}

template <typename Scalar = double>
struct ResponseTimePrediction
{
    Scalar lower;        ///< eps_0 + c U2 / (U2 - U1)
    Scalar upper;        ///< eps_0 + (1 + (U2 - U1)/U2) c U2 / (U2 - U1), exclusive
    long long cycles;    ///< N with N <= U2/(U2 - U1) < N + 1
};

namespace detail
{
template <typename Scalar>
long long floor_to_integer(const Scalar& x)
{
    if constexpr (std::is_floating_point_v<Scalar>)
    {
        return static_cast<long long>(std::floor(x));
    }
    else
    {
        long long n = 0;
        while (Scalar(n + 1) <= x)
            ++n;
        return n;
    }
}
} // namespace detail

/// Closed-form bracket [lower, upper) for the switch-over time after the shock.
template <typename Scalar = double>
ResponseTimePrediction<Scalar> predict_response_time(const TransitionScenario<Scalar>& sc)
{
    sc.validate();
    const Scalar gap = sc.challenger - sc.incumbent;
    const Scalar ratio = sc.challenger / gap;
    const Scalar base = sc.cycle() * ratio;
    const Scalar gamma_max = Scalar(1) + gap / sc.challenger;
    return {sc.processing_delay + base, sc.processing_delay + gamma_max * base, detail::floor_to_integer(ratio)};
}

/**
 * Optional second phase: the slow process eventually raises neuron 1 to
 * incumbent_after > U2, and the same recursion runs with the roles swapped,
 * starting `delay` after the first transition settled.
 */
struct SlowPhase
{
    double incumbent_after;
    double delay;
};

struct TwoPhaseResult
{
    DynamicsTrace<double> first;
    DynamicsTrace<double> second;  ///< times measured from the start of the first phase
    ResponseTimePrediction<double> first_prediction;
    ResponseTimePrediction<double> second_prediction;
};

inline TwoPhaseResult simulate_two_phase(const TransitionScenario<double>& sc, const SlowPhase& slow, double tol)
{
    detail::require(slow.incumbent_after > sc.challenger, "simulate_two_phase: slow process must exceed U2");
    detail::require(slow.delay >= 0.0, "simulate_two_phase: delay must be >= 0");
    TwoPhaseResult res;
    res.first = simulate_transition(sc, tol);
    res.first_prediction = predict_response_time(sc);

    TransitionScenario<double> swapped;
    swapped.incumbent = sc.challenger;
    swapped.challenger = slow.incumbent_after;
    swapped.challenger_before = 0.0;  // neuron 1 was silenced by the first transition
    swapped.processing_delay = slow.delay;
    swapped.lag_12 = sc.lag_21;
    swapped.lag_21 = sc.lag_12;
    res.second = simulate_transition(swapped, tol);
    res.second_prediction = predict_response_time(swapped);

    const double offset = res.first.settle_time;
    for (auto& s : res.second.samples)
    {
        s.time += offset;
        std::swap(s.f1, s.f2);
    }
    res.second.settle_time += offset;
    res.second_prediction.lower += offset;
    res.second_prediction.upper += offset;
    return res;
}

struct Breakpoint
{
    double time;
    double value;
};

struct DelayedTrace
{
    std::vector<std::vector<Breakpoint>> history;  ///< per neuron, value from each breakpoint onward
    std::vector<double> final_f;
    bool settled = false;     ///< no pending change before the horizon
    double last_change = 0.0;
    std::size_t events = 0;
};

/**
 * Event-driven evaluation of f_i(t) = [U_i - sum_j k_ji f_j(t - eps_ji)]_+ for a
 * network with lags. Before t = 0 every neuron holds `initial`; at t = 0 all
 * neurons re-evaluate, and afterwards neuron i re-evaluates whenever an input
 * change reaches it. Signals are piecewise constant.
 */
inline DelayedTrace simulate_delayed_network(const MINetwork& net, std::vector<double> initial, double horizon,
                                             std::size_t max_events = 1'000'000)
{
    net.validate();
    detail::require(net.lags.has_value(), "simulate_delayed_network: network has no lag matrix");
    const std::size_t n = net.size();
    detail::require(initial.size() == n, "simulate_delayed_network: initial state has wrong size");
    detail::require(horizon > 0.0, "simulate_delayed_network: horizon must be > 0");
    for (double v : initial)
        detail::require(v >= 0.0 && std::isfinite(v), "simulate_delayed_network: initial frequencies must be >= 0");
    const SquareMatrix& lag = *net.lags;

    DelayedTrace tr;
    tr.history.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        tr.history[i].push_back({-std::numeric_limits<double>::infinity(), initial[i]});

    auto value_at = [&](std::size_t j, double t) {
        const double eps = 1e-9 * (1.0 + std::abs(t));
        const auto& h = tr.history[j];
        auto it = std::upper_bound(h.begin(), h.end(), t + eps,
                                   [](double v, const Breakpoint& b) { return v < b.time; });
        return std::prev(it)->value;
    };

    // (time, neuron) evaluations, merged when they coincide
    std::map<double, std::vector<bool>> agenda;
    auto schedule = [&](double t, std::size_t i) {
        auto it = agenda.lower_bound(t - 1e-9 * (1.0 + std::abs(t)));
        if (it == agenda.end() || it->first > t + 1e-9 * (1.0 + std::abs(t)))
            it = agenda.emplace(t, std::vector<bool>(n, false)).first;
        it->second[i] = true;
    };
    for (std::size_t i = 0; i < n; ++i)
        schedule(0.0, i);

    while (!agenda.empty())
    {
        auto node = agenda.begin();
        const double t = node->first;
        if (t > horizon)
            break;
        const std::vector<bool> who = node->second;
        agenda.erase(node);

        std::vector<std::pair<std::size_t, double>> changes;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!who[i])
                continue;
            double drive = net.uninhibited[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    drive -= net.inhibition(j, i) * value_at(j, t - lag(j, i));
            const double v = rectify(drive);
            if (v != tr.history[i].back().value)
                changes.emplace_back(i, v);
        }
        for (auto [i, v] : changes)
        {
            tr.history[i].push_back({t, v});
            tr.last_change = t;
            for (std::size_t k = 0; k < n; ++k)
                if (k != i && net.inhibition(i, k) != 0.0)
                    schedule(t + lag(i, k), k);
        }
        if (++tr.events >= max_events)
            break;
    }
    tr.settled = agenda.empty();
    for (std::size_t i = 0; i < n; ++i)
        tr.final_f.push_back(tr.history[i].back().value);
    return tr;
}

} // namespace neurochoice

#endif // NEUROCHOICE_RESPONSE_TIME_HPP
