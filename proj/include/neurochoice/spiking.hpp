#ifndef NEUROCHOICE_SPIKING_HPP
#define NEUROCHOICE_SPIKING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

// Leaky integrate-and-fire network simulation.
//
// Units throughout: milliseconds, millivolts, and consistent derived units
// for capacitance, conductance and current (e.g. nF, uS, nA).

namespace neurochoice
{

/// Electrical constants of one neuron.
struct NeuronParams
{
    double capacitance = 1.0;
    double leak_conductance = 0.1;
    double base_potential = -70.0;      ///< V^E, the leak reversal (lowest reachable potential)
    double reset_potential = -65.0;     ///< V^B, potential right after a spike
    double threshold_potential = -50.0; ///< V^T

    void validate() const
    {
        detail::require(std::isfinite(capacitance) && capacitance > 0.0, "NeuronParams: capacitance must be > 0");
        detail::require(std::isfinite(leak_conductance) && leak_conductance > 0.0,
                        "NeuronParams: leak_conductance must be > 0");
        detail::require(std::isfinite(base_potential) && std::isfinite(reset_potential) &&
                            std::isfinite(threshold_potential),
                        "NeuronParams: potentials must be finite");
        detail::require(base_potential < reset_potential && reset_potential < threshold_potential,
                        "NeuronParams: requires base < reset < threshold potential");
    }

    /// Smallest constant current that eventually drives the neuron to threshold: g (V^T - V^E).
    double rheobase() const { return leak_conductance * (threshold_potential - base_potential); }

    /// Potential drop on firing, V^T - V^B.
    double reset_drop() const { return threshold_potential - reset_potential; }
};

/// Closed-form inter-spike interval for constant current, starting from reset.
/// Returns +infinity when the current never reaches threshold.
inline double lif_period(const NeuronParams& p, double current)
{
    p.validate();
    if (current <= p.rheobase())
        return std::numeric_limits<double>::infinity();
    const double g = p.leak_conductance;
    return (p.capacitance / g) *
           std::log((current - g * (p.reset_potential - p.base_potential)) / (current - p.rheobase()));
}

/// Directed connection; the sign of pulse_size distinguishes excitation from inhibition.
struct Synapse
{
    std::size_t pre = 0;
    std::size_t post = 0;
    double conductance = 1.0;
    double pulse_size = 1.0;
    double delay = 1.0;

    /// Charge delivered per pulse, a * q.
    double induced_current() const { return conductance * pulse_size; }

    void validate() const
    {
        detail::require(std::isfinite(conductance) && conductance > 0.0, "Synapse: conductance must be > 0");
        detail::require(std::isfinite(pulse_size), "Synapse: pulse_size must be finite");
        detail::require(std::isfinite(delay) && delay >= 0.0, "Synapse: delay must be >= 0");
    }
};

struct CurrentSegment
{
    double start = 0.0;
    double current = 0.0;
};

/// Piecewise-constant injected current. Zero before the first segment.
class ExternalCurrentProfile
{
public:
    ExternalCurrentProfile() = default;
    explicit ExternalCurrentProfile(std::vector<CurrentSegment> segments) : segments_(std::move(segments))
    {
        validate();
    }

    static ExternalCurrentProfile constant(double current) { return ExternalCurrentProfile({{0.0, current}}); }

    void validate() const
    {
        for (std::size_t k = 0; k < segments_.size(); ++k)
        {
            detail::require(std::isfinite(segments_[k].start) && std::isfinite(segments_[k].current),
                            "ExternalCurrentProfile: non-finite segment");
            if (k > 0)
                detail::require(segments_[k].start > segments_[k - 1].start,
                                "ExternalCurrentProfile: segment starts must be strictly increasing");
        }
    }

    double current_at(double t) const
    {
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double v, const CurrentSegment& s) { return v < s.start; });
        return it == segments_.begin() ? 0.0 : std::prev(it)->current;
    }

    const std::vector<CurrentSegment>& segments() const { return segments_; }

private:
    std::vector<CurrentSegment> segments_;
};

struct SpikingNetwork
{
    std::vector<NeuronParams> neurons;
    std::vector<Synapse> synapses;
    std::vector<ExternalCurrentProfile> external;  ///< one per neuron, or empty for no injection
    std::vector<double> initial_potential;        ///< empty means every neuron starts at reset

    std::size_t size() const { return neurons.size(); }

    void validate() const
    {
        for (const auto& n : neurons)
            n.validate();
        for (const auto& s : synapses)
        {
            s.validate();
            detail::require(s.pre < neurons.size() && s.post < neurons.size(), "Synapse: neuron id out of range");
        }
        detail::require(external.empty() || external.size() == neurons.size(),
                        "SpikingNetwork: need one external profile per neuron");
        detail::require(initial_potential.empty() || initial_potential.size() == neurons.size(),
                        "SpikingNetwork: need one initial potential per neuron");
        for (std::size_t i = 0; i < initial_potential.size(); ++i)
            detail::require(initial_potential[i] >= neurons[i].base_potential &&
                                initial_potential[i] < neurons[i].threshold_potential,
                            "SpikingNetwork: initial potential must lie in [base, threshold)");
    }
};

struct SimulationOptions
{
    double duration = 1000.0;
    double dt = 0.01;
    bool record_trace = false;
    std::size_t trace_stride = 1;
    double averaging_start = 0.0;  ///< mean_potential averages steps with t > averaging_start
};

struct TracePoint
{
    double time;
    std::size_t neuron;
    double potential;
};

struct SpikeRecord
{
    std::vector<std::vector<double>> spike_times;  ///< per neuron, strictly increasing
    std::vector<TracePoint> trace;
    std::vector<double> mean_potential;            ///< per neuron, over (averaging_start, duration]
    double duration = 0.0;
    double dt = 0.0;

    std::size_t spike_count(std::size_t neuron) const { return spike_times.at(neuron).size(); }
};

/**
 * Fixed-step simulation of a leaky integrate-and-fire network.
 *
 * Each step of length dt advances every potential by forward Euler,
 * dV = (I_ext - g (V - V^E)) dt / C, using the injected current at the start
 * of the step. Pulses due in the step are then applied as jumps of A/C in
 * ascending (pre, post) order, the potential is floored at V^E, and any neuron
 * at or above V^T records a spike at the step boundary and resets to V^B.
 * A spike emitted at step k reaches its target at step k + max(1, ceil(delay/dt)).
 */
inline SpikeRecord simulate(const SpikingNetwork& net, const SimulationOptions& opt)
{
    net.validate();
    detail::require(std::isfinite(opt.dt) && opt.dt > 0.0, "simulate: dt must be > 0");
    detail::require(std::isfinite(opt.duration) && opt.duration > 0.0, "simulate: duration must be > 0");
    detail::require(opt.trace_stride >= 1, "simulate: trace_stride must be >= 1");

    const std::size_t n = net.size();
    const double dt = opt.dt;

    std::size_t max_lag_steps = 1;
    std::vector<std::size_t> lag_steps(net.synapses.size());
    for (std::size_t s = 0; s < net.synapses.size(); ++s)
    {
        const double delay = net.synapses[s].delay;
        if (delay > 0.0 && dt >= delay)
            throw PreconditionError("simulate: dt must be smaller than every positive synapse delay (dt=" +
                                    std::to_string(dt) + ", delay=" + std::to_string(delay) + ")");
        const double ratio = delay / dt;
        lag_steps[s] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio - 1e-9 * (1.0 + ratio))));
        max_lag_steps = std::max(max_lag_steps, lag_steps[s]);
    }

    // outgoing[i] lists synapse indices with pre == i, ordered by post
    std::vector<std::vector<std::size_t>> outgoing(n);
    for (std::size_t s = 0; s < net.synapses.size(); ++s)
        outgoing[net.synapses[s].pre].push_back(s);
    for (auto& out : outgoing)
        std::stable_sort(out.begin(), out.end(),
                         [&](std::size_t a, std::size_t b) { return net.synapses[a].post < net.synapses[b].post; });

    struct Delivery
    {
        std::size_t pre;
        std::size_t post;
        double jump;
    };
    // Ring of pending deliveries indexed by arrival step.
    std::vector<std::vector<Delivery>> pending(max_lag_steps + 1);

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = net.initial_potential.empty() ? net.neurons[i].reset_potential : net.initial_potential[i];

    SpikeRecord rec;
    rec.spike_times.resize(n);
    rec.mean_potential.assign(n, 0.0);
    rec.duration = opt.duration;
    rec.dt = dt;

    const auto steps = static_cast<std::size_t>(std::floor(opt.duration / dt * (1.0 + 1e-12)));
    std::size_t averaged_steps = 0;

    auto record_trace = [&](double t) {
        for (std::size_t i = 0; i < n; ++i)
            rec.trace.push_back({t, i, v[i]});
    };
    if (opt.record_trace)
        record_trace(0.0);

    for (std::size_t k = 1; k <= steps; ++k)
    {
        const double t_prev = static_cast<double>(k - 1) * dt;
        const double t = static_cast<double>(k) * dt;

        for (std::size_t i = 0; i < n; ++i)
        {
            const NeuronParams& p = net.neurons[i];
            const double injected = net.external.empty() ? 0.0 : net.external[i].current_at(t_prev);
            v[i] += dt / p.capacitance * (injected - p.leak_conductance * (v[i] - p.base_potential));
        }

        auto& due = pending[k % pending.size()];
        std::sort(due.begin(), due.end(), [](const Delivery& a, const Delivery& b) {
            return a.pre != b.pre ? a.pre < b.pre : a.post < b.post;
        });
        for (const Delivery& d : due)
            v[d.post] += d.jump;
        due.clear();

        for (std::size_t i = 0; i < n; ++i)
        {
            const NeuronParams& p = net.neurons[i];
            if (!std::isfinite(v[i]))
                throw NumericalError("simulate: non-finite potential for neuron " + std::to_string(i) +
                                     " at t=" + std::to_string(t) + "; reduce dt");
            v[i] = std::max(v[i], p.base_potential);
            if (v[i] >= p.threshold_potential)
            {
                rec.spike_times[i].push_back(t);
                v[i] = p.reset_potential;
                for (std::size_t s : outgoing[i])
                {
                    const Synapse& syn = net.synapses[s];
                    pending[(k + lag_steps[s]) % pending.size()].push_back(
                        {syn.pre, syn.post, syn.induced_current() / net.neurons[syn.post].capacitance});
                }
            }
        }

        if (t > opt.averaging_start)
        {
            ++averaged_steps;
            for (std::size_t i = 0; i < n; ++i)
                rec.mean_potential[i] += v[i];
        }
        if (opt.record_trace && k % opt.trace_stride == 0)
            record_trace(t);
    }

    for (double& m : rec.mean_potential)
        m = averaged_steps > 0 ? m / static_cast<double>(averaged_steps) : std::numeric_limits<double>::quiet_NaN();
    return rec;
}

struct TimeWindow
{
    double start;
    double end;

    double length() const { return end - start; }
};

struct FrequencyEstimate
{
    std::vector<double> frequency;      ///< spikes per unit time
    std::vector<bool> low_confidence;   ///< fewer than two spikes in the window
};

/// Spike count in [start, end) divided by the window length.
inline FrequencyEstimate measure_frequency(const SpikeRecord& rec, TimeWindow window)
{
    detail::require(window.end > window.start, "measure_frequency: empty window");
    detail::require(window.start >= 0.0 && window.end <= rec.duration * (1.0 + 1e-12),
                    "measure_frequency: window outside the simulated duration");
    FrequencyEstimate est;
    for (const auto& spikes : rec.spike_times)
    {
        auto lo = std::lower_bound(spikes.begin(), spikes.end(), window.start);
        auto hi = std::lower_bound(spikes.begin(), spikes.end(), window.end);
        const auto count = static_cast<std::size_t>(hi - lo);
        est.frequency.push_back(static_cast<double>(count) / window.length());
        est.low_confidence.push_back(count < 2);
    }
    return est;
}

/// Mean inter-spike interval of the spikes inside a window; NaN with fewer than two spikes.
inline double mean_interspike_interval(std::span<const double> spikes, TimeWindow window)
{
    auto lo = std::lower_bound(spikes.begin(), spikes.end(), window.start);
    auto hi = std::lower_bound(spikes.begin(), spikes.end(), window.end);
    if (hi - lo < 2)
        return std::numeric_limits<double>::quiet_NaN();
    return (*std::prev(hi) - *lo) / static_cast<double>(hi - lo - 1);
}

} // namespace neurochoice

#endif // NEUROCHOICE_SPIKING_HPP
