#ifndef NEUROCHOICE_RANDOM_MI_HPP
#define NEUROCHOICE_RANDOM_MI_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "rng.hpp"

// Mutual inhibition in the central case with logistic noise on the
// uninhibited frequencies. lambda is the precision (inverse scale) of the
// noise: E[mu + eps]_+ = (1/lambda) ln(1 + e^{lambda mu}), and the noise
// variance is pi^2 / (3 lambda^2).

namespace neurochoice
{

struct RandomMISpec
{
    std::vector<double> mean_uninhibited;  ///< expected uninhibited frequencies
    double lambda = 1.0;

    std::size_t size() const { return mean_uninhibited.size(); }

    void validate() const
    {
        detail::require(!mean_uninhibited.empty(), "RandomMISpec: need at least one alternative");
        detail::require(std::isfinite(lambda) && lambda > 0.0, "RandomMISpec: lambda must be > 0");
        for (double u : mean_uninhibited)
            detail::require(std::isfinite(u), "RandomMISpec: mean frequencies must be finite");
    }
};

/// (1/lambda) ln(1 + e^{lambda mu}), the mean of a rectified logistic variable.
inline double softplus_expectation(double mu, double lambda)
{
    detail::require(lambda > 0.0, "softplus_expectation: lambda must be > 0");
    return log1pexp(lambda * mu) / lambda;
}

struct FixedPointSolution
{
    std::vector<double> f_bar;        ///< mean post-inhibition frequencies, all > 0
    double m = 0.0;                   ///< sum of f_bar from the scalar equation
    double gap = 0.0;                 ///< m - max U_bar, strictly positive
    std::vector<double> probability;  ///< f_bar / sum f_bar
    double residual = 0.0;            ///< max_i |f_i - softplus(U_i - sum_{j != i} f_j)|
};

namespace detail
{
// ln(f_i) for f_i = -(1/lambda) ln(1 - e^{-z}); stays finite when f_i underflows.
inline double log_mean_frequency(double z, double lambda)
{
    const double inner = z < 700.0 ? -log1mexp(z) : 0.0;
    const double log_inner = inner > 0.0 ? std::log(inner) : -z;
    return log_inner - std::log(lambda);
}

inline std::vector<double> normalize_logs(const std::vector<double>& logs)
{
    const double top = *std::max_element(logs.begin(), logs.end());
    std::vector<double> p(logs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i)
        sum += (p[i] = std::exp(logs[i] - top));
    for (double& v : p)
        v /= sum;
    return p;
}
} // namespace detail

/// max_i |f_i - softplus(U_i - sum_{j != i} f_j)| for a candidate vector.
inline double random_mi_residual(const RandomMISpec& spec, const std::vector<double>& f)
{
    const double total = std::accumulate(f.begin(), f.end(), 0.0);
    double r = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        r = std::max(r, std::abs(f[i] - softplus_expectation(spec.mean_uninhibited[i] - (total - f[i]), spec.lambda)));
    return r;
}

/**
 * Solves the mean-frequency system through its scalar reduction
 *   m = -(1/lambda) sum_j ln(1 - e^{-lambda (m - U_j)}),
 *   f_i = -(1/lambda) ln(1 - e^{-lambda (m - U_i)}).
 *
 * The unknown is parametrized as m = U* + x/lambda with x > 0 and bisected in
 * ln x, so the winner's frequency keeps full precision even when m sits a
 * hair above U*. The result is then checked against the componentwise system.
 */
inline FixedPointSolution solve_random_mi(const RandomMISpec& spec, double tol = 1e-8)
{
    spec.validate();
    detail::require(tol > 0.0, "solve_random_mi: tol must be > 0");
    const double lam = spec.lambda;
    const auto& u = spec.mean_uninhibited;
    const double top = *std::max_element(u.begin(), u.end());

    // increasing in y = ln x; -> -inf as x -> 0 and -> +inf as x -> inf
    auto equation = [&](double y) {
        const double x = std::exp(y);
        double s = top + x / lam;
        for (double uj : u)
            s += log1mexp(x + lam * (top - uj)) / lam;
        return s;
    };

    constexpr double y_floor = -700.0;
    if (equation(y_floor) >= 0.0)
        throw NumericalError("solve_random_mi: root lies below the representable gap (lambda * U* too large)");
    double y_hi = std::log(std::max(1.0, lam * std::abs(top)) + 1.0);
    int grow = 0;
    while (equation(y_hi) < 0.0)
    {
        y_hi += 1.0;  // x grows geometrically
        if (++grow > 200)
            throw NumericalError("solve_random_mi: could not bracket the root");
    }
    const double y = bisect_increasing(equation, y_floor, y_hi);
    const double x = std::exp(y);

    FixedPointSolution sol;
    sol.gap = x / lam;
    sol.m = top + sol.gap;
    std::vector<double> logs;
    for (double ui : u)
    {
        const double z = x + lam * (top - ui);
        sol.f_bar.push_back(-log1mexp(z) / lam);
        logs.push_back(detail::log_mean_frequency(z, lam));
    }
    sol.probability = detail::normalize_logs(logs);
    sol.residual = random_mi_residual(spec, sol.f_bar);
    if (!(sol.residual <= tol))
        throw NumericalError("solve_random_mi: solution violates the componentwise system (residual " +
                             std::to_string(sol.residual) + ")");
    return sol;
}

struct PositiveApproximation
{
    std::vector<double> probability;
    double omega = 0.0;
    bool reliable = true;  ///< false when omega > 0.1
};

/// Approximation for a positive best alternative: m ~ U* + omega/lambda with small omega.
inline PositiveApproximation approx_probabilities_positive(const RandomMISpec& spec)
{
    spec.validate();
    const auto& u = spec.mean_uninhibited;
    const double lam = spec.lambda;
    const std::size_t best = argmax(u);
    const double top = u[best];
    detail::require(top > 0.0, "approx_probabilities_positive: requires max U_bar > 0");
    detail::require(std::count(u.begin(), u.end(), top) == 1,
                    "approx_probabilities_positive: requires a unique best alternative");

    double log_omega = -lam * top;
    for (std::size_t j = 0; j < u.size(); ++j)
        if (j != best)
            log_omega -= log1mexp(lam * (top - u[j]));
    PositiveApproximation out;
    out.omega = std::exp(log_omega);
    out.reliable = out.omega <= 0.1;

    // ln(1 - e^{-lambda (U* - U_i)} e^{-omega}) = log1mexp(lambda (U* - U_i) + omega); the best term keeps omega alone
    std::vector<double> logs(u.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sum += (logs[i] = log1mexp(lam * (top - u[i]) + out.omega));
    for (double l : logs)
        out.probability.push_back(l / sum);
    return out;
}

/// Approximation for a negative best alternative (m ~ 0).
inline std::vector<double> approx_probabilities_negative(const RandomMISpec& spec)
{
    spec.validate();
    const auto& u = spec.mean_uninhibited;
    detail::require(*std::max_element(u.begin(), u.end()) < 0.0,
                    "approx_probabilities_negative: requires max U_bar < 0");
    // ln(1 - e^{lambda U}) with lambda U < 0; ratio of same-sign logs
    std::vector<double> logs;
    for (double ui : u)
        logs.push_back(detail::log_mean_frequency(-spec.lambda * ui, spec.lambda));
    return detail::normalize_logs(logs);
}

/// Multinomial logit e^{lambda U_i} / sum_j e^{lambda U_j}.
inline std::vector<double> logit_probabilities(const RandomMISpec& spec)
{
    spec.validate();
    std::vector<double> logs;
    for (double ui : spec.mean_uninhibited)
        logs.push_back(spec.lambda * ui);
    return detail::normalize_logs(logs);
}

struct OrdinalityReport
{
    std::vector<double> before;
    std::vector<double> after;
    double max_abs_delta = 0.0;
};

/// Exact probabilities before and after adding theta to every mean frequency.
inline OrdinalityReport ordinality_violation(const RandomMISpec& spec, double theta)
{
    detail::require(theta != 0.0 && std::isfinite(theta), "ordinality_violation: theta must be a nonzero shift");
    RandomMISpec shifted = spec;
    for (double& u : shifted.mean_uninhibited)
        u += theta;
    OrdinalityReport r{solve_random_mi(spec).probability, solve_random_mi(shifted).probability, 0.0};
    for (std::size_t i = 0; i < r.before.size(); ++i)
        r.max_abs_delta = std::max(r.max_abs_delta, std::abs(r.after[i] - r.before[i]));
    return r;
}

struct IiaReport
{
    double ratio_before;
    double ratio_after;
    double logit_ratio_before;  ///< e^{lambda (U_i - U_j)}, untouched by the perturbation
    double logit_ratio_after;
};

/// P_i / P_j before and after moving a third alternative's mean by delta.
inline IiaReport iia_violation(const RandomMISpec& spec, std::size_t i, std::size_t j, std::size_t h, double delta)
{
    spec.validate();
    const std::size_t n = spec.size();
    detail::require(n >= 3, "iia_violation: needs at least three alternatives");
    detail::require(i < n && j < n && h < n, "iia_violation: index out of range");
    detail::require(i != j && i != h && j != h, "iia_violation: indices must be distinct");
    detail::require(std::isfinite(delta), "iia_violation: delta must be finite");

    RandomMISpec moved = spec;
    moved.mean_uninhibited[h] += delta;
    const auto before = solve_random_mi(spec).probability;
    const auto after = solve_random_mi(moved).probability;
    const auto logit_before = logit_probabilities(spec);
    const auto logit_after = logit_probabilities(moved);
    return {before[i] / before[j], after[i] / after[j], logit_before[i] / logit_before[j],
            logit_after[i] / logit_after[j]};
}

/// Mean frequency shared by N identical alternatives: f = softplus(U - (N - 1) f). N may be real, N > 1.
inline double symmetric_fixed_point(double mean_uninhibited, double lambda, double alternatives)
{
    detail::require(lambda > 0.0, "symmetric_fixed_point: lambda must be > 0");
    detail::require(alternatives > 1.0, "symmetric_fixed_point: needs more than one alternative");
    // g is increasing in f; g(0) < 0 and g(softplus(U)) >= 0
    auto g = [&](double f) { return f - softplus_expectation(mean_uninhibited - (alternatives - 1.0) * f, lambda); };
    const double hi = softplus_expectation(mean_uninhibited, lambda);
    if (!(hi > 0.0))
        throw NumericalError("symmetric_fixed_point: root not bracketed (softplus underflow)");
    return bisect_increasing(g, 0.0, hi);
}

/// Analytic dT/dN = (1/f) (1 - e^{-lambda f}) / (e^{-lambda f} + (1 - e^{-lambda f}) N).
inline double hick_slope(double f_bar, double lambda, double alternatives)
{
    const double decay = std::exp(-lambda * f_bar);
    const double rise = -std::expm1(-lambda * f_bar);
    return rise / (f_bar * (decay + rise * alternatives));
}

struct HickRow
{
    int alternatives;
    double f_bar;
    double response_time;          ///< eps_0 + 1/f_bar
    double slope_analytic;
    double slope_finite_difference;
};

/// Response time table over N identical alternatives, with the analytic slope and a centered difference.
inline std::vector<HickRow> hicks_law(double mean_uninhibited, double lambda, int n_min, int n_max, double eps0,
                                      double fd_step = 1e-4)
{
    detail::require(lambda > 0.0, "hicks_law: lambda must be > 0");
    detail::require(n_min >= 2 && n_max >= n_min, "hicks_law: requires 2 <= N_min <= N_max");
    detail::require(eps0 >= 0.0, "hicks_law: eps0 must be >= 0");
    detail::require(fd_step > 0.0 && fd_step < 0.5, "hicks_law: finite-difference step must be in (0, 0.5)");
    auto response_time = [&](double n) { return eps0 + 1.0 / symmetric_fixed_point(mean_uninhibited, lambda, n); };
    std::vector<HickRow> rows;
    for (int n = n_min; n <= n_max; ++n)
    {
        const double nn = static_cast<double>(n);
        const double f = symmetric_fixed_point(mean_uninhibited, lambda, nn);
        const double fd = (response_time(nn + fd_step) - response_time(nn - fd_step)) / (2.0 * fd_step);
        rows.push_back({n, f, eps0 + 1.0 / f, hick_slope(f, lambda, nn), fd});
    }
    return rows;
}

/// Running mean and variance for one block of samples (Welford), mergeable in a fixed order.
struct SampleStats
{
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const SampleStats& o)
    {
        if (o.count == 0.0)
            return;
        const double total = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }

    double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
    double std_error() const { return std::sqrt(variance() / count); }
};

inline constexpr std::uint64_t monte_carlo_block = 1u << 16;

/**
 * Statistics of fn(eps) over `samples` logistic draws. Work is cut into fixed
 * blocks, each drawn from its own counter stream and reduced in block order,
 * so the result is bit-identical for any worker count.
 */
template <typename Fn>
SampleStats logistic_sample_stats(double lambda, std::uint64_t samples, std::uint64_t seed, std::uint64_t stream_base,
                                  unsigned jobs, Fn fn)
{
    const std::uint64_t blocks = (samples + monte_carlo_block - 1) / monte_carlo_block;
    std::vector<SampleStats> per_block(blocks);
    auto work = [&](unsigned worker) {
        for (std::uint64_t b = worker; b < blocks; b += jobs)
        {
            const CounterRng rng(seed, stream_base + b);
            const std::uint64_t begin = b * monte_carlo_block;
            const std::uint64_t end = std::min(samples, begin + monte_carlo_block);
            SampleStats s;
            for (std::uint64_t k = begin; k < end; ++k)
                s.add(fn(logistic_from_uniform(rng.uniform(k - begin), lambda)));
            per_block[b] = s;
        }
    };
    jobs = std::max(1u, jobs);
    if (jobs == 1)
    {
        work(0);
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    SampleStats total;
    for (const auto& s : per_block)
        total.merge(s);
    return total;
}

struct MonteCarloEstimate
{
    double estimate;
    double std_error;
    double target;

    double z_score() const
    {
        if (std_error > 0.0)
            return (estimate - target) / std_error;
        return estimate == target ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), estimate - target);
    }
    bool within(double standard_errors) const { return std::abs(estimate - target) <= standard_errors * std_error; }
};

/// E[mu + eps]_+ by simulation, against the closed form.
inline MonteCarloEstimate monte_carlo_softplus(double mu, double lambda, std::uint64_t samples, std::uint64_t seed,
                                               unsigned jobs = 1)
{
    detail::require(lambda > 0.0, "monte_carlo_softplus: lambda must be > 0");
    detail::require(samples >= 2, "monte_carlo_softplus: need at least two samples");
    const SampleStats s =
        logistic_sample_stats(lambda, samples, seed, 0, jobs, [mu](double eps) { return rectify(mu + eps); });
    return {s.mean, s.std_error(), softplus_expectation(mu, lambda)};
}

struct MonteCarloCheck
{
    std::vector<MonteCarloEstimate> alternatives;
    double noise_variance = 0.0;           ///< sample variance of the raw draws
    double noise_variance_expected = 0.0;  ///< pi^2 / (3 lambda^2)
};

/// Re-derives each f_bar_i as E[U_i - sum_{j != i} f_j + eps_i]_+ by simulation at a solved fixed point.
inline MonteCarloCheck monte_carlo_check(const RandomMISpec& spec, const FixedPointSolution& sol, std::uint64_t samples,
                                         std::uint64_t seed, unsigned jobs = 1)
{
    spec.validate();
    detail::require(samples >= 100000, "monte_carlo_check: requires at least 1e5 samples");
    detail::require(sol.f_bar.size() == spec.size(), "monte_carlo_check: solution does not match the alternatives");
    const double total = std::accumulate(sol.f_bar.begin(), sol.f_bar.end(), 0.0);
    MonteCarloCheck out;
    for (std::size_t i = 0; i < spec.size(); ++i)
    {
        const double drive = spec.mean_uninhibited[i] - (total - sol.f_bar[i]);
        const SampleStats s = logistic_sample_stats(spec.lambda, samples, seed, (std::uint64_t{i} + 1) << 32, jobs,
                                                    [drive](double eps) { return rectify(drive + eps); });
        out.alternatives.push_back({s.mean, s.std_error(), sol.f_bar[i]});
    }
    const SampleStats noise = logistic_sample_stats(spec.lambda, samples, seed, 0, jobs, [](double eps) { return eps; });
    out.noise_variance = noise.variance();
    constexpr double pi = 3.14159265358979323846;
    out.noise_variance_expected = pi * pi / (3.0 * spec.lambda * spec.lambda);
    return out;
}

} // namespace neurochoice

#endif // NEUROCHOICE_RANDOM_MI_HPP
