#ifndef NEUROCHOICE_MI_NETWORK_HPP
#define NEUROCHOICE_MI_NETWORK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "rate_model.hpp"
#include "spiking.hpp"

namespace neurochoice
{

/// Dense row-major n x n matrix.
class SquareMatrix
{
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/**
 * Mutual-inhibition network in the frequency domain.
 *
 * inhibition(j, i) is the relative inhibition ratio k_ji exerted by neuron j
 * on neuron i; lags(j, i) is the transmission lag on the same connection.
 * Uninhibited frequencies are kept unrectified and may be negative.
 */
struct MINetwork
{
    std::vector<double> uninhibited;
    SquareMatrix inhibition;
    std::optional<SquareMatrix> lags;

    /// All ratios equal to one.
    static MINetwork central(std::vector<double> u)
    {
        MINetwork net;
        const std::size_t n = u.size();
        net.uninhibited = std::move(u);
        net.inhibition = SquareMatrix(n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            net.inhibition(i, i) = 0.0;
        return net;
    }

    std::size_t size() const { return uninhibited.size(); }

    bool central_case() const
    {
        for (std::size_t j = 0; j < size(); ++j)
            for (std::size_t i = 0; i < size(); ++i)
                if (i != j && inhibition(j, i) != 1.0)
                    return false;
        return true;
    }

    void validate() const
    {
        const std::size_t n = size();
        detail::require(n >= 1, "MINetwork: need at least one neuron");
        detail::require(inhibition.size() == n, "MINetwork: inhibition matrix must be n x n");
        for (double u : uninhibited)
            detail::require(std::isfinite(u), "MINetwork: uninhibited frequencies must be finite");
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
            {
                if (i == j)
                    detail::require(inhibition(j, i) == 0.0, "MINetwork: inhibition diagonal must be zero");
                else
                    detail::require(std::isfinite(inhibition(j, i)) && inhibition(j, i) >= 0.0,
                                    "MINetwork: inhibition ratios must be >= 0");
            }
        if (lags)
        {
            detail::require(lags->size() == n, "MINetwork: lag matrix must be n x n");
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i)
                    if (i != j)
                        detail::require(std::isfinite((*lags)(j, i)) && (*lags)(j, i) > 0.0,
                                        "MINetwork: off-diagonal lags must be > 0");
        }
    }
};

/// U_i - sum_{j != i} k_ji f_j, before rectification.
inline double inhibited_drive(const MINetwork& net, std::span<const double> f, std::size_t i)
{
    double drive = net.uninhibited[i];
    for (std::size_t j = 0; j < net.size(); ++j)
        if (j != i)
            drive -= net.inhibition(j, i) * f[j];
    return drive;
}

/// max_i |f_i - [U_i - sum_{j != i} k_ji f_j]_+|
inline double steady_state_residual(const MINetwork& net, std::span<const double> f)
{
    double r = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i)
        r = std::max(r, std::abs(f[i] - rectify(inhibited_drive(net, f, i))));
    return r;
}

struct SteadyState
{
    std::vector<double> f;
    double residual = 0.0;

    std::vector<bool> active() const
    {
        std::vector<bool> a;
        for (double v : f)
            a.push_back(v > 0.0);
        return a;
    }

    std::size_t active_count() const
    {
        return static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [](double v) { return v > 0.0; }));
    }
};

struct IterationResult
{
    std::vector<double> f;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/**
 * Damped fixed-point iteration f_i <- (1 - eta) f_i + eta [U_i - sum k_ji f_j]_+.
 *
 * Components are updated in place in index order, so each update already sees
 * the neurons refreshed before it in the same sweep. Simultaneous updates are
 * not used: in the central case their linearization on an m-neuron active set
 * has eigenvalue 1 - eta m, which is unstable at eta = 0.5 for m > 4.
 * The start point defaults to [U]_+, the corner of the invariant box.
 */
inline IterationResult iterate_steady_state(const MINetwork& net, double tol, std::size_t max_iter,
                                            double damping = 0.5,
                                            std::optional<std::vector<double>> start = std::nullopt)
{
    net.validate();
    detail::require(tol > 0.0, "iterate_steady_state: tol must be > 0");
    detail::require(damping > 0.0 && damping <= 1.0, "iterate_steady_state: damping must be in (0, 1]");
    const std::size_t n = net.size();

    IterationResult res;
    if (start)
    {
        detail::require(start->size() == n, "iterate_steady_state: start vector has wrong size");
        res.f = *start;
    }
    else
    {
        res.f.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            res.f[i] = rectify(net.uninhibited[i]);
    }

    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations)
    {
        res.residual = steady_state_residual(net, res.f);
        if (res.residual <= tol)
        {
            res.converged = true;
            return res;
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            const double target = rectify(inhibited_drive(net, res.f, i));
            res.f[i] = (1.0 - damping) * res.f[i] + damping * target;
        }
    }
    res.residual = steady_state_residual(net, res.f);
    res.converged = res.residual <= tol;
    return res;
}

namespace detail
{
// Solves a (dense, small) system in place with partial pivoting. False if singular.
inline bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t m)
{
    double scale = 0.0;
    for (double v : a)
        scale = std::max(scale, std::abs(v));
    const double eps = 1e-12 * std::max(1.0, scale);
    for (std::size_t col = 0; col < m; ++col)
    {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col]))
                piv = r;
        if (std::abs(a[piv * m + col]) <= eps)
            return false;
        if (piv != col)
        {
            for (std::size_t c = 0; c < m; ++c)
                std::swap(a[col * m + c], a[piv * m + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < m; ++r)
        {
            const double factor = a[r * m + col] / a[col * m + col];
            if (factor == 0.0)
                continue;
            for (std::size_t c = col; c < m; ++c)
                a[r * m + c] -= factor * a[col * m + c];
            b[r] -= factor * b[col];
        }
    }
    for (std::size_t r = m; r-- > 0;)
    {
        double s = b[r];
        for (std::size_t c = r + 1; c < m; ++c)
            s -= a[r * m + c] * b[c];
        b[r] = s / a[r * m + r];
    }
    return true;
}

inline double acceptance_tolerance(const MINetwork& net, double tol)
{
    return std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + max_abs(net.uninhibited)));
}

inline bool same_state(std::span<const double> a, std::span<const double> b, double tol)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol)
            return false;
    return true;
}
} // namespace detail

namespace detail
{
/**
 * Re-solves the active equations on the support of an iterated solution, so
 * losing neurons come out exactly zero instead of carrying a geometric tail.
 * Leaves f untouched unless the polished vector verifies.
 */
inline void polish_on_support(const MINetwork& net, std::vector<double>& f, double& residual, double tol)
{
    const std::size_t n = net.size();
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
        if (inhibited_drive(net, f, i) > 0.0)
            support.push_back(i);
    const std::size_t m = support.size();
    std::vector<double> candidate(n, 0.0);
    if (m > 0)
    {
        std::vector<double> a(m * m), b(m);
        for (std::size_t r = 0; r < m; ++r)
        {
            b[r] = net.uninhibited[support[r]];
            for (std::size_t c = 0; c < m; ++c)
                a[r * m + c] = r == c ? 1.0 : net.inhibition(support[c], support[r]);
        }
        if (!solve_linear(a, b, m))
            return;
        for (std::size_t r = 0; r < m; ++r)
        {
            if (b[r] < 0.0)
                return;
            candidate[support[r]] = b[r];
        }
    }
    const double r = steady_state_residual(net, candidate);
    if (r <= acceptance_tolerance(net, tol))
    {
        f = std::move(candidate);
        residual = r;
    }
}
} // namespace detail

struct EnumerationResult
{
    std::vector<SteadyState> states;
    std::size_t singular_supports = 0;  ///< supports whose linear system was singular (possible continua)
};

inline constexpr std::size_t max_enumeration_size = 20;

/**
 * Exhaustive active-set search. For every support S the active equations
 * f_i + sum_{j in S, j != i} k_ji f_j = U_i are solved; a candidate is kept when
 * its active components are non-negative, every inactive drive is non-positive,
 * and the full residual is within tolerance. Returns every isolated steady state.
 */
inline EnumerationResult enumerate_steady_states(const MINetwork& net, double tol)
{
    net.validate();
    const std::size_t n = net.size();
    detail::require(n <= max_enumeration_size, "enumerate_steady_states: network too large for support search");
    const double accept = detail::acceptance_tolerance(net, tol);

    EnumerationResult out;
    std::vector<std::size_t> support;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask)
    {
        support.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i))
                support.push_back(i);
        const std::size_t m = support.size();

        std::vector<double> f(n, 0.0);
        if (m > 0)
        {
            std::vector<double> a(m * m), b(m);
            for (std::size_t r = 0; r < m; ++r)
            {
                b[r] = net.uninhibited[support[r]];
                for (std::size_t c = 0; c < m; ++c)
                    a[r * m + c] = r == c ? 1.0 : net.inhibition(support[c], support[r]);
            }
            if (!detail::solve_linear(a, b, m))
            {
                ++out.singular_supports;
                continue;
            }
            bool feasible = true;
            for (std::size_t r = 0; r < m; ++r)
            {
                if (b[r] < -accept)
                    feasible = false;
                f[support[r]] = rectify(b[r]);
            }
            if (!feasible)
                continue;
        }
        const double residual = steady_state_residual(net, f);
        if (residual > accept)
            continue;
        const bool duplicate = std::any_of(out.states.begin(), out.states.end(), [&](const SteadyState& s) {
            return detail::same_state(s.f, f, 1e3 * accept);
        });
        if (!duplicate)
            out.states.push_back({std::move(f), residual});
    }
    return out;
}

enum class SolveMethod
{
    iteration,
    enumeration
};

struct SolverOptions
{
    double damping = 0.5;
    std::size_t enumerate_up_to = 3;  ///< report the full steady-state set for n at or below this size
};

struct SteadyStateReport
{
    std::vector<SteadyState> states;  ///< first entry is the iteration's answer when it converged
    SolveMethod method = SolveMethod::iteration;
    std::size_t iterations = 0;
    double iteration_residual = 0.0;
    bool iteration_converged = false;
    std::size_t singular_supports = 0;

    bool multiple() const { return states.size() > 1; }
    const SteadyState& primary() const { return states.front(); }
};

/**
 * Steady states of f = [U - K f]_+.
 *
 * Runs the damped iteration; for small networks also enumerates every support
 * so that multiplicity is reported instead of silently picking one state. If
 * the iteration fails to converge the support search is the fallback.
 */
inline SteadyStateReport solve_steady_state(const MINetwork& net, double tol = 1e-12, std::size_t max_iter = 100000,
                                            SolverOptions options = {})
{
    net.validate();
    detail::require(tol > 0.0, "solve_steady_state: tol must be > 0");
    SteadyStateReport report;
    const IterationResult it = iterate_steady_state(net, tol, max_iter, options.damping);
    report.iterations = it.iterations;
    report.iteration_residual = it.residual;
    report.iteration_converged = it.converged;
    if (it.converged)
    {
        std::vector<double> f = it.f;
        double residual = it.residual;
        detail::polish_on_support(net, f, residual, tol);
        report.states.push_back({std::move(f), residual});
    }

    const bool enumerate = net.size() <= options.enumerate_up_to || (!it.converged && net.size() <= max_enumeration_size);
    if (enumerate)
    {
        EnumerationResult all = enumerate_steady_states(net, tol);
        report.singular_supports = all.singular_supports;
        const double same = 1e3 * detail::acceptance_tolerance(net, tol);
        for (auto& s : all.states)
        {
            const bool duplicate = std::any_of(report.states.begin(), report.states.end(),
                                               [&](const SteadyState& r) { return detail::same_state(r.f, s.f, same); });
            if (!duplicate)
                report.states.push_back(std::move(s));
        }
        if (!it.converged)
            report.method = SolveMethod::enumeration;
    }
    if (report.states.empty())
        throw NumericalError("solve_steady_state: no steady state found (best iteration residual " +
                             std::to_string(it.residual) + " after " + std::to_string(it.iterations) +
                             " iterations)");
    return report;
}

struct Winner
{
    std::size_t index;
    double frequency;
};

struct Inaction
{
    double best_value;
};

using CentralChoice = std::variant<Winner, Inaction>;

/// Winner-take-all rule of the central case: inaction when max U <= 0, else the unique argmax fires at U*.
inline CentralChoice central_case_choice(std::span<const double> u)
{
    detail::require(!u.empty(), "central_case_choice: empty frequency list");
    const std::size_t best = argmax(u);
    if (u[best] <= 0.0)
        return Inaction{u[best]};
    if (std::count(u.begin(), u.end(), u[best]) > 1)
        throw TieError("central_case_choice: maximum uninhibited frequency is attained more than once");
    return Winner{best, u[best]};
}

/// Output frequency of the whole mechanism, [U*]_+.
inline double mechanism_output(std::span<const double> u)
{
    detail::require(!u.empty(), "mechanism_output: empty frequency list");
    return rectify(u[argmax(u)]);
}

/// Uninhibited frequency alpha (I_ext + sum A f - beta), deliberately not rectified.
inline double uninhibited_frequency(const RateCoefficients& c, const RateInput& exterior)
{
    c.validate();
    exterior.validate();
    return c.alpha * (expected_current(exterior) - c.beta);
}

/// k_ji = alpha_i |A_ji| for an inhibitory synapse into the receiver.
inline double relative_inhibition(const RateCoefficients& receiver, const Synapse& synapse)
{
    synapse.validate();
    const double a = synapse.induced_current();
    detail::require(a < 0.0, "relative_inhibition: synapses inside the mechanism must be inhibitory");
    return receiver.alpha * std::abs(a);
}

/// Two-neuron instance of a pathological regime; index 0 is neuron i, index 1 neuron j.
struct RegimeExample
{
    MINetwork network;
    SteadyState expected;
};

/**
 * With k_ij > 1 (i onto j), choose U_j = top and U_i inside (U_j / k_ij, U_j):
 * the smaller-U neuron i alone fires at U_i and j is held silent.
 */
inline RegimeExample loser_wins_example(double k_ij, double top = 1.0, std::optional<double> k_ji = std::nullopt)
{
    detail::require(k_ij > 1.0 && std::isfinite(k_ij), "loser_wins_example: requires k_ij > 1");
    detail::require(top > 0.0, "loser_wins_example: requires U_j > 0");
    const double back = k_ji.value_or(k_ij);
    detail::require(back >= 0.0, "loser_wins_example: k_ji must be >= 0");
    const double u_i = 0.5 * (top / k_ij + top);
    RegimeExample ex;
    ex.network.uninhibited = {u_i, top};
    ex.network.inhibition = SquareMatrix(2, 0.0);
    ex.network.inhibition(0, 1) = k_ij;
    ex.network.inhibition(1, 0) = back;
    ex.expected.f = {u_i, 0.0};
    ex.expected.residual = steady_state_residual(ex.network, ex.expected.f);
    return ex;
}

/**
 * With k_ij < 1, k_ij k_ji < 1 and k_ji < 1, choose U_j = top and U_i inside
 * (U_j k_ji, U_j): both neurons fire, at the closed-form frequencies of the
 * two-equation active system.
 */
inline RegimeExample parallel_activity_example(double k_ij, double k_ji, double top = 1.0)
{
    detail::require(k_ij >= 0.0 && k_ji >= 0.0, "parallel_activity_example: ratios must be >= 0");
    detail::require(k_ij < 1.0 && k_ij * k_ji < 1.0, "parallel_activity_example: requires k_ij < 1 and k_ij k_ji < 1");
    detail::require(k_ji < 1.0, "parallel_activity_example: interval (U_j k_ji, U_j) is empty when k_ji >= 1");
    detail::require(top > 0.0, "parallel_activity_example: requires U_j > 0");
    const double u_i = 0.5 * (top * k_ji + top);
    const double det = 1.0 - k_ij * k_ji;
    RegimeExample ex;
    ex.network.uninhibited = {u_i, top};
    ex.network.inhibition = SquareMatrix(2, 0.0);
    ex.network.inhibition(0, 1) = k_ij;
    ex.network.inhibition(1, 0) = k_ji;
    ex.expected.f = {(u_i - k_ji * top) / det, (top - k_ij * u_i) / det};
    ex.expected.residual = steady_state_residual(ex.network, ex.expected.f);
    return ex;
}

} // namespace neurochoice

#endif // NEUROCHOICE_MI_NETWORK_HPP
