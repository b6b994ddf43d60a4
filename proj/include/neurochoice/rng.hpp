#ifndef NEUROCHOICE_RNG_HPP
#define NEUROCHOICE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace neurochoice
{

/**
 * Counter-based random source.
 *
 * Every draw is a pure function of (seed, stream, counter), hashed with the
 * SplitMix64 finalizer. Output does not depend on platform, call order or the
 * number of worker threads, so Monte Carlo work can be partitioned into
 * streams and still reproduce bit-exactly.
 */
class CounterRng
{
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed), stream_(stream)
    {
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept
    {
        return mix(mix(mix(seed_) ^ stream_) ^ counter);
    }

    /// Uniform on the open interval (0, 1).
    constexpr double uniform(std::uint64_t counter) const noexcept
    {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Sequential convenience: advances an internal counter.
    double next_uniform() noexcept { return uniform(counter_++); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

/// Logistic(0, 1/lambda) draw by inversion: density proportional to e^{-lambda x}/(1+e^{-lambda x})^2.
inline double logistic_from_uniform(double u, double lambda)
{
    return std::log(u / (1.0 - u)) / lambda;
}

} // namespace neurochoice

#endif // NEUROCHOICE_RNG_HPP
