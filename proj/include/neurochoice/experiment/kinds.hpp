#ifndef NEUROCHOICE_EXPERIMENT_KINDS_HPP
#define NEUROCHOICE_EXPERIMENT_KINDS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "../errors.hpp"
#include "../mi_network.hpp"
#include "../neural_utility.hpp"
#include "../random_mi.hpp"
#include "../rate_model.hpp"
#include "../response_time.hpp"
#include "../spiking.hpp"
#include "csv.hpp"
#include "report.hpp"
#include "schema.hpp"

// Scenario kinds: parameter parsing with field-level diagnostics, and the
// runners that turn parameters into output files and checks.

namespace neurochoice::experiment
{

namespace detail
{
/// Runs a module precondition check and turns its exception into a diagnostic.
inline void guard(Diagnostics& diag, const std::string& field, const std::function<void()>& fn)
{
    try
    {
        fn();
    }
    catch (const std::exception& e)
    {
        diag.push_back({field, e.what()});
    }
}

inline NeuronParams read_neuron(Reader& r)
{
    NeuronParams p;
    p.capacitance = r.number("capacitance", p.capacitance);
    p.leak_conductance = r.number("leak_conductance", p.leak_conductance);
    p.base_potential = r.number("base_potential", p.base_potential);
    p.reset_potential = r.number("reset_potential", p.reset_potential);
    p.threshold_potential = r.number("threshold_potential", p.threshold_potential);
    guard(r.diagnostics(), r.path(), [&] { p.validate(); });
    return p;
}

inline NeuronParams read_optional_neuron(Reader& r, const std::string& key)
{
    if (auto sub = r.object(key))
    {
        NeuronParams p = read_neuron(*sub);
        sub->finish();
        return p;
    }
    return NeuronParams{};
}

inline BetaPolicy read_beta_policy(Reader& r)
{
    const std::string s = r.string("beta_policy", "midpoint");
    try
    {
        return parse_beta_policy(s);
    }
    catch (const PreconditionError& e)
    {
        r.error("beta_policy", e.what());
        return BetaPolicy::midpoint;
    }
}

inline void require_positive(Reader& r, const std::string& key, double v)
{
    if (!(v > 0.0))
        r.error(key, "must be > 0");
}

inline void require_non_negative(Reader& r, const std::string& key, double v)
{
    if (!(v >= 0.0))
        r.error(key, "must be >= 0");
}

inline double relative_error(double value, double target)
{
    return std::abs(value - target) / std::max(std::abs(target), std::numeric_limits<double>::min());
}

inline json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

inline json choice_json(const CentralChoice& c)
{
    if (const auto* w = std::get_if<Winner>(&c))
        return {{"winner", {{"index", w->index}, {"frequency", w->frequency}}}};
    return {{"inaction", {{"best_value", std::get<Inaction>(c).best_value}}}};
}

/// Frequency from the spikes in a window: 1 / mean interval when there are two or more, else count / length.
inline double window_frequency(const std::vector<double>& spikes, TimeWindow w)
{
    const double isi = mean_interspike_interval(spikes, w);
    if (std::isfinite(isi))
        return 1.0 / isi;
    const auto lo = std::lower_bound(spikes.begin(), spikes.end(), w.start);
    const auto hi = std::lower_bound(spikes.begin(), spikes.end(), w.end);
    return static_cast<double>(hi - lo) / w.length();
}
} // namespace detail

// ---------------------------------------------------------------- spikes

struct SpikesParams
{
    SpikingNetwork network;
    SimulationOptions options;
    TimeWindow window{0.0, 0.0};
    double period_tolerance = 0.01;
};

inline SpikesParams parse_spikes(Reader& r)
{
    SpikesParams p;
    p.options.duration = r.number("duration");
    p.options.dt = r.number("dt");
    p.options.record_trace = r.boolean("trace", false);
    const auto stride = r.integer("trace_stride", 1);
    if (stride < 1)
        r.error("trace_stride", "must be >= 1");
    p.options.trace_stride = static_cast<std::size_t>(std::max<std::int64_t>(stride, 1));
    p.period_tolerance = r.number("period_tolerance", p.period_tolerance);
    detail::require_positive(r, "duration", p.options.duration);
    detail::require_positive(r, "dt", p.options.dt);
    detail::require_positive(r, "period_tolerance", p.period_tolerance);

    bool any_initial = false;
    std::vector<std::optional<double>> initial;
    for (auto& n : r.objects("neurons"))
    {
        p.network.neurons.push_back(detail::read_neuron(n));
        if (n.has("current") && n.has("segments"))
            n.error("", "give either current or segments, not both");
        std::vector<CurrentSegment> segs;
        if (auto c = n.opt_number("current"))
            segs.push_back({0.0, *c});
        for (auto& s : n.objects("segments", false))
        {
            segs.push_back({s.number("start"), s.number("current")});
            s.finish();
        }
        p.network.external.emplace_back();
        try
        {
            p.network.external.back() = ExternalCurrentProfile(segs);
        }
        catch (const PreconditionError& e)
        {
            n.diagnostics().push_back({n.field("segments"), e.what()});
        }
        initial.push_back(n.opt_number("initial_potential"));
        any_initial = any_initial || initial.back().has_value();
        n.finish();
    }
    if (p.network.neurons.empty() && r.has("neurons"))
        r.error("neurons", "need at least one neuron");
    if (any_initial)
        for (std::size_t i = 0; i < initial.size(); ++i)
            p.network.initial_potential.push_back(initial[i].value_or(p.network.neurons[i].reset_potential));

    for (auto& s : r.objects("synapses", false))
    {
        Synapse syn;
        const auto pre = s.integer("pre");
        const auto post = s.integer("post");
        if (pre < 0)
            s.error("pre", "must be >= 0");
        if (post < 0)
            s.error("post", "must be >= 0");
        syn.pre = static_cast<std::size_t>(std::max<std::int64_t>(pre, 0));
        syn.post = static_cast<std::size_t>(std::max<std::int64_t>(post, 0));
        syn.conductance = s.number("conductance", syn.conductance);
        syn.pulse_size = s.number("pulse_size", syn.pulse_size);
        syn.delay = s.number("delay", syn.delay);
        p.network.synapses.push_back(syn);
        s.finish();
    }
    for (std::size_t k = 0; k < p.network.synapses.size(); ++k)
    {
        const Synapse& s = p.network.synapses[k];
        const std::string field = r.field("synapses[" + std::to_string(k) + "]");
        detail::guard(r.diagnostics(), field, [&] { s.validate(); });
        if (s.pre >= p.network.size() || s.post >= p.network.size())
            r.diagnostics().push_back({field, "neuron id out of range"});
        if (s.delay > 0.0 && p.options.dt >= s.delay)
            r.diagnostics().push_back({field + ".delay", "dt must be smaller than every positive synapse delay"});
    }
    for (std::size_t i = 0; i < p.network.initial_potential.size(); ++i)
    {
        const double v = p.network.initial_potential[i];
        const NeuronParams& n = p.network.neurons[i];
        if (!(v >= n.base_potential && v < n.threshold_potential))
            r.diagnostics().push_back({r.field("neurons[" + std::to_string(i) + "].initial_potential"),
                                       "must lie in [base_potential, threshold_potential)"});
    }

    p.window = {0.2 * p.options.duration, p.options.duration};
    if (auto w = r.object("window"))
    {
        p.window.start = w->number("start", p.window.start);
        p.window.end = w->number("end", p.window.end);
        if (!(p.window.end > p.window.start && p.window.start >= 0.0 && p.window.end <= p.options.duration))
            w->error("", "window must satisfy 0 <= start < end <= duration");
        w->finish();
    }
    p.options.averaging_start = p.window.start;
    return p;
}

inline Outputs run_spikes(const SpikesParams& p, const RunContext&)
{
    const SpikeRecord rec = simulate(p.network, p.options);
    Outputs out;

    std::vector<std::tuple<double, std::size_t>> events;
    for (std::size_t i = 0; i < rec.spike_times.size(); ++i)
        for (double t : rec.spike_times[i])
            events.emplace_back(t, i);
    std::sort(events.begin(), events.end());
    CsvTable spikes({"neuron_id", "spike_time"});
    for (auto [t, i] : events)
        spikes.row() << i << t;
    out.files["spikes.csv"] = spikes.str();

    if (p.options.record_trace)
    {
        CsvTable trace({"time", "neuron_id", "V"});
        bool bounded = true;
        for (const auto& tp : rec.trace)
        {
            trace.row() << tp.time << tp.neuron << tp.potential;
            const NeuronParams& n = p.network.neurons[tp.neuron];
            bounded = bounded && tp.potential >= std::min(n.base_potential, n.reset_potential) &&
                      tp.potential <= n.threshold_potential;
        }
        out.files["trace.csv"] = trace.str();
        out.check("sampled potentials within [base, threshold]", bounded, rec.trace.size(), nullptr);
    }

    std::vector<bool> has_input(p.network.size(), false);
    for (const auto& s : p.network.synapses)
        has_input[s.post] = true;

    const FrequencyEstimate est = measure_frequency(rec, p.window);
    json neurons = json::array();
    for (std::size_t i = 0; i < p.network.size(); ++i)
    {
        json j{{"neuron_id", i},
               {"spike_count", rec.spike_count(i)},
               {"frequency", est.frequency[i]},
               {"low_confidence", static_cast<bool>(est.low_confidence[i])},
               {"mean_potential", detail::number_or_null(rec.mean_potential[i])}};
        if (est.low_confidence[i])
            out.warnings.push_back("neuron " + std::to_string(i) + ": fewer than two spikes in the window");

        const auto& segs = p.network.external[i].segments();
        const bool constant = segs.size() == 1 && segs[0].start <= 0.0;
        if (!has_input[i] && constant && segs[0].current > p.network.neurons[i].rheobase())
        {
            const double expected = lif_period(p.network.neurons[i], segs[0].current);
            const double measured = mean_interspike_interval(rec.spike_times[i], p.window);
            const double err = std::isfinite(measured) ? detail::relative_error(measured, expected)
                                                       : std::numeric_limits<double>::infinity();
            j["closed_form_period"] = expected;
            j["measured_period"] = detail::number_or_null(measured);
            out.check("neuron " + std::to_string(i) + " period matches closed form", err <= p.period_tolerance,
                      {{"relative_error", detail::number_or_null(err)}}, {{"relative", p.period_tolerance}});
        }
        neurons.push_back(std::move(j));
    }
    out.add_json("summary.json",
                 {{"window", {p.window.start, p.window.end}}, {"dt", p.options.dt}, {"neurons", std::move(neurons)}});
    return out;
}

// ---------------------------------------------------------------- fi-sweep

struct FiSweepParams
{
    NeuronParams neuron;
    std::vector<double> currents;
    double duration = 0.0;
    double dt = 0.0;
    std::optional<double> steps_per_period;
    BetaPolicy policy = BetaPolicy::midpoint;
    double warmup_fraction = 0.2;
    double curve_tolerance = 0.02;
};

inline FiSweepParams parse_fi_sweep(Reader& r)
{
    FiSweepParams p;
    p.neuron = detail::read_optional_neuron(r, "neuron");
    if (r.has("currents") && r.has("current_range"))
        r.error("", "give either currents or current_range, not both");
    if (auto range = r.object("current_range"))
    {
        const double from = range->number("from");
        const double to = range->number("to");
        const auto points = range->integer("points");
        if (points < 2)
            range->error("points", "must be >= 2");
        else if (!(to > from))
            range->error("to", "must exceed from");
        else
            for (std::int64_t k = 0; k < points; ++k)
                p.currents.push_back(from + (to - from) * static_cast<double>(k) / static_cast<double>(points - 1));
        range->finish();
    }
    else
    {
        p.currents = r.numbers("currents");
        if (p.currents.empty() && r.has("currents"))
            r.error("currents", "need at least one current");
    }
    p.duration = r.number("duration");
    detail::require_positive(r, "duration", p.duration);
    p.dt = r.number("dt", 0.01);
    detail::require_positive(r, "dt", p.dt);
    if (auto s = r.opt_number("steps_per_period"))
    {
        if (*s < 10.0)
            r.error("steps_per_period", "must be >= 10");
        p.steps_per_period = *s;
    }
    p.policy = detail::read_beta_policy(r);
    p.warmup_fraction = r.number("warmup_fraction", p.warmup_fraction);
    if (!(p.warmup_fraction >= 0.0 && p.warmup_fraction < 1.0))
        r.error("warmup_fraction", "must lie in [0, 1)");
    p.curve_tolerance = r.number("curve_tolerance", p.curve_tolerance);
    detail::require_positive(r, "curve_tolerance", p.curve_tolerance);
    return p;
}

inline Outputs run_fi_sweep(const FiSweepParams& p, const RunContext&)
{
    Outputs out;
    const RateCoefficients c = derive_coefficients(p.neuron, p.policy);
    CsvTable table({"current", "f_low", "f_model", "f_high", "f_simulated"});
    std::size_t violations = 0;
    double worst_curve = 0.0;
    json details = json::array();
    for (double current : p.currents)
    {
        double dt = p.dt;
        const double period = lif_period(p.neuron, current);
        if (p.steps_per_period && std::isfinite(period))
            dt = period / *p.steps_per_period;
        SpikingNetwork net{{p.neuron}, {}, {ExternalCurrentProfile::constant(current)}, {}};
        SimulationOptions opt;
        opt.duration = p.duration;
        opt.dt = dt;
        const TimeWindow window{p.warmup_fraction * p.duration, p.duration};
        opt.averaging_start = window.start;
        const SpikeRecord rec = simulate(net, opt);

        const double f_sim = detail::window_frequency(rec.spike_times[0], window);
        const FrequencyBounds b = fi_bounds(p.neuron, current);
        const double f_model = rate_response(c, RateInput{current, {}});
        table.row() << current << b.low << f_model << b.high << f_sim;
        const bool inside = f_sim >= b.low && f_sim <= b.high;
        if (!inside)
            ++violations;

        json d{{"current", current}, {"dt", dt}, {"contained", inside}};
        if (rec.spike_times[0].size() >= 3 && std::isfinite(rec.mean_potential[0]))
        {
            // f-I curve at the simulated mean potential; exact over whole cycles
            const double vbar = std::clamp(rec.mean_potential[0], p.neuron.base_potential, p.neuron.threshold_potential);
            const double f_curve = fi_curve(p.neuron, current, vbar);
            const double err = detail::relative_error(f_sim, f_curve);
            worst_curve = std::max(worst_curve, err);
            d["mean_potential"] = vbar;
            d["f_curve"] = f_curve;
        }
        details.push_back(std::move(d));
    }
    out.files["fi_sweep.csv"] = table.str();
    out.add_json("fi_sweep.json", {{"alpha", c.alpha},
                                   {"beta", c.beta},
                                   {"beta_low", c.beta_low},
                                   {"beta_high", c.beta_high},
                                   {"rows", std::move(details)}});
    out.check("simulated frequency within the f-I bounds", violations == 0, {{"violations", violations}},
              {{"violations", 0}});
    out.check("simulated frequency matches the f-I curve at the simulated mean potential",
              worst_curve <= p.curve_tolerance, {{"max_relative_error", worst_curve}},
              {{"relative", p.curve_tolerance}});
    return out;
}

// ---------------------------------------------------------------- mi-steady

struct MiSteadyParams
{
    MINetwork network;
    double tol = 1e-12;
    std::size_t max_iter = 100000;
    SolverOptions options;
    double check_tolerance = 1e-9;
};

inline MiSteadyParams parse_mi_steady(Reader& r)
{
    MiSteadyParams p;
    const auto u = r.numbers("U");
    if (u.empty() && r.has("U"))
        r.error("U", "need at least one neuron");
    const bool central = r.boolean("central", !r.has("inhibition"));
    const auto k = r.matrix("inhibition", false);
    if (central && !k.empty())
        r.error("central", "central case fixes every ratio to one; drop inhibition or set central to false");
    p.network = MINetwork::central(u);
    if (!central)
    {
        if (k.size() != u.size())
            r.error("inhibition", "must be an n x n matrix matching U");
        else
            for (std::size_t j = 0; j < k.size(); ++j)
            {
                if (k[j].size() != u.size())
                {
                    r.error("inhibition[" + std::to_string(j) + "]", "row length must match U");
                    continue;
                }
                for (std::size_t i = 0; i < u.size(); ++i)
                    p.network.inhibition(j, i) = k[j][i];
            }
    }
    p.tol = r.number("tol", p.tol);
    detail::require_positive(r, "tol", p.tol);
    const auto iters = r.integer("max_iter", static_cast<std::int64_t>(p.max_iter));
    if (iters < 1)
        r.error("max_iter", "must be >= 1");
    p.max_iter = static_cast<std::size_t>(std::max<std::int64_t>(iters, 1));
    p.options.damping = r.number("damping", p.options.damping);
    if (!(p.options.damping > 0.0 && p.options.damping <= 1.0))
        r.error("damping", "must lie in (0, 1]");
    const auto enumerate = r.integer("enumerate_up_to", static_cast<std::int64_t>(p.options.enumerate_up_to));
    if (enumerate < 0 || enumerate > static_cast<std::int64_t>(max_enumeration_size))
        r.error("enumerate_up_to", "must lie in [0, " + std::to_string(max_enumeration_size) + "]");
    p.options.enumerate_up_to = static_cast<std::size_t>(std::clamp<std::int64_t>(enumerate, 0, 20));
    p.check_tolerance = r.number("check_tolerance", p.check_tolerance);
    detail::require_positive(r, "check_tolerance", p.check_tolerance);
    if (!u.empty() && r.diagnostics().empty())
        detail::guard(r.diagnostics(), r.field("inhibition"), [&] { p.network.validate(); });
    return p;
}

inline std::string steady_state_csv(const MINetwork& net, const SteadyState& s)
{
    CsvTable t({"neuron_id", "U", "f", "active_flag"});
    for (std::size_t i = 0; i < net.size(); ++i)
        t.row() << i << net.uninhibited[i] << s.f[i] << (s.f[i] > 0.0);
    return t.str();
}

inline Outputs run_mi_steady(const MiSteadyParams& p, const RunContext&)
{
    Outputs out;
    const SteadyStateReport rep = solve_steady_state(p.network, p.tol, p.max_iter, p.options);
    const SteadyState& s = rep.primary();
    out.files["steady_state.csv"] = steady_state_csv(p.network, s);

    json states = json::array();
    for (const auto& st : rep.states)
        states.push_back({{"f", st.f}, {"residual", st.residual}, {"active_count", st.active_count()}});
    out.add_json("solver.json", {{"method", rep.method == SolveMethod::iteration ? "iteration" : "enumeration"},
                                 {"iterations", rep.iterations},
                                 {"iteration_residual", rep.iteration_residual},
                                 {"iteration_converged", rep.iteration_converged},
                                 {"multiplicity", rep.states.size()},
                                 {"singular_supports", rep.singular_supports},
                                 {"states", std::move(states)}});
    if (rep.multiple())
        out.warnings.push_back("network has " + std::to_string(rep.states.size()) + " steady states");
    // in the central case singular supports only matter for ties, reported below
    if (rep.singular_supports > 0 && !p.network.central_case())
        out.warnings.push_back("support search met singular systems; a continuum of states may exist");

    double worst = 0.0;
    for (const auto& st : rep.states)
        worst = std::max(worst, st.residual);
    out.check("steady-state residual", worst <= p.check_tolerance, {{"max_residual", worst}},
              {{"absolute", p.check_tolerance}});

    if (p.network.central_case())
    {
        try
        {
            const CentralChoice choice = central_case_choice(p.network.uninhibited);
            double err = 0.0;
            bool same = true;
            for (std::size_t i = 0; i < p.network.size(); ++i)
            {
                double expected = 0.0;
                if (const auto* w = std::get_if<Winner>(&choice); w && w->index == i)
                    expected = w->frequency;
                err = std::max(err, std::abs(s.f[i] - expected));
                same = same && ((s.f[i] > p.check_tolerance) == (expected > 0.0));
            }
            out.check("matches the central-case winner-take-all rule", same && err <= p.check_tolerance,
                      {{"max_abs_difference", err}, {"rule", detail::choice_json(choice)}},
                      {{"absolute", p.check_tolerance}});
        }
        catch (const TieError& e)
        {
            out.warnings.push_back(std::string(e.what()) + "; steady state is not unique");
        }
    }
    return out;
}

// ---------------------------------------------------------------- mi-regimes

struct RegimeRequest
{
    std::string type;  ///< loser-wins or parallel
    double k_ij = 0.0;
    std::optional<double> k_ji;
    double top = 1.0;
};

struct MiRegimesParams
{
    std::vector<RegimeRequest> instances;
    double check_tolerance = 1e-9;
};

inline MiRegimesParams parse_mi_regimes(Reader& r)
{
    MiRegimesParams p;
    for (auto& e : r.objects("instances"))
    {
        RegimeRequest q;
        q.type = e.string("type", "");
        q.k_ij = e.number("k_ij");
        q.k_ji = e.opt_number("k_ji");
        q.top = e.number("top", 1.0);
        if (q.type == "loser-wins")
            detail::guard(e.diagnostics(), e.field("k_ij"), [&] { loser_wins_example(q.k_ij, q.top, q.k_ji); });
        else if (q.type == "parallel")
        {
            if (!q.k_ji)
                e.error("k_ji", "required for parallel instances");
            else
                detail::guard(e.diagnostics(), e.field("k_ji"),
                              [&] { parallel_activity_example(q.k_ij, *q.k_ji, q.top); });
        }
        else
            e.error("type", "expected loser-wins or parallel");
        p.instances.push_back(q);
        e.finish();
    }
    if (p.instances.empty() && r.has("instances"))
        r.error("instances", "need at least one instance");
    p.check_tolerance = r.number("check_tolerance", p.check_tolerance);
    detail::require_positive(r, "check_tolerance", p.check_tolerance);
    return p;
}

inline Outputs run_mi_regimes(const MiRegimesParams& p, const RunContext&)
{
    Outputs out;
    CsvTable t({"instance", "type", "k_ij", "k_ji", "U_i", "U_j", "f_i", "f_j", "residual"});
    for (std::size_t k = 0; k < p.instances.size(); ++k)
    {
        const RegimeRequest& q = p.instances[k];
        const bool loser = q.type == "loser-wins";
        const RegimeExample ex = loser ? loser_wins_example(q.k_ij, q.top, q.k_ji)
                                       : parallel_activity_example(q.k_ij, *q.k_ji, q.top);
        const auto& u = ex.network.uninhibited;
        const auto& f = ex.expected.f;
        t.row() << k << q.type << ex.network.inhibition(0, 1) << ex.network.inhibition(1, 0) << u[0] << u[1] << f[0]
                << f[1] << ex.expected.residual;

        const EnumerationResult all = enumerate_steady_states(ex.network, p.check_tolerance);
        const bool listed = std::any_of(all.states.begin(), all.states.end(), [&](const SteadyState& s) {
            return neurochoice::detail::same_state(s.f, f, p.check_tolerance);
        });
        const std::string tag = "instance " + std::to_string(k) + " (" + q.type + ")";
        out.check(tag + " is a steady state", ex.expected.residual <= p.check_tolerance && listed,
                  {{"residual", ex.expected.residual}, {"found_by_support_search", listed}},
                  {{"absolute", p.check_tolerance}});
        if (loser)
            out.check(tag + ": smaller-U neuron alone active", u[0] < u[1] && f[0] > 0.0 && f[1] == 0.0,
                      {{"U", u}, {"f", f}}, nullptr);
        else
            out.check(tag + ": both neurons active", ex.expected.active_count() >= 2, {{"f", f}}, nullptr);
    }
    out.files["regimes.csv"] = t.str();
    return out;
}

// ---------------------------------------------------------------- response-time

struct ResponseTimeParams
{
    TransitionScenario<double> scenario;
    double tol = 1e-12;
    std::optional<SlowPhase> slow;
};

inline ResponseTimeParams parse_response_time(Reader& r)
{
    ResponseTimeParams p;
    auto& sc = p.scenario;
    sc.incumbent = r.number("U1");
    sc.challenger = r.number("U2");
    sc.challenger_before = r.number("U2_pre", 0.0);
    sc.processing_delay = r.number("eps0", 0.0);
    sc.lag_12 = r.number("eps12", 1.0);
    sc.lag_21 = r.number("eps21", 1.0);
    p.tol = r.number("tol", p.tol);
    if (!(sc.incumbent > 0.0))
        r.error("U1", "requires U1 > 0");
    if (!(sc.challenger > sc.incumbent))
        r.error("U2", "requires U2 > U1: the challenger must exceed the incumbent for a transition to occur");
    if (!(sc.challenger_before < sc.incumbent))
        r.error("U2_pre", "requires U2_pre < U1: the incumbent must win before the shock");
    detail::require_non_negative(r, "eps0", sc.processing_delay);
    detail::require_positive(r, "eps12", sc.lag_12);
    detail::require_positive(r, "eps21", sc.lag_21);
    detail::require_non_negative(r, "tol", p.tol);
    if (auto s = r.object("slow_phase"))
    {
        SlowPhase slow{s->number("U1_after"), s->number("delay", 0.0)};
        if (!(slow.incumbent_after > sc.challenger))
            s->error("U1_after", "requires U1_after > U2");
        detail::require_non_negative(*s, "delay", slow.delay);
        p.slow = slow;
        s->finish();
    }
    return p;
}

inline Outputs run_response_time(const ResponseTimeParams& p, const RunContext&)
{
    Outputs out;
    const auto& sc = p.scenario;
    DynamicsTrace<double> first;
    ResponseTimePrediction<double> pred;
    std::optional<TwoPhaseResult> two;
    if (p.slow)
    {
        two = simulate_two_phase(sc, *p.slow, p.tol);
        first = two->first;
        pred = two->first_prediction;
    }
    else
    {
        first = simulate_transition(sc, p.tol);
        pred = predict_response_time(sc);
    }

    CsvTable trace({"t", "f1", "f2"});
    for (const auto& s : first.samples)
        trace.row() << s.time << s.f1 << s.f2;
    if (two)
        for (const auto& s : two->second.samples)
            trace.row() << s.time << s.f1 << s.f2;
    out.files["trace.csv"] = trace.str();

    const bool contained = first.settle_time >= pred.lower && first.settle_time < pred.upper;
    json pj{{"lower", pred.lower},
            {"upper", pred.upper},
            {"N", pred.cycles},
            {"settle_time", first.settle_time},
            {"cycles", first.cycles},
            {"contained", contained}};
    if (two)
    {
        const bool c2 = two->second.settle_time >= two->second_prediction.lower &&
                        two->second.settle_time < two->second_prediction.upper;
        pj["second_phase"] = {{"lower", two->second_prediction.lower},
                              {"upper", two->second_prediction.upper},
                              {"N", two->second_prediction.cycles},
                              {"settle_time", two->second.settle_time},
                              {"contained", c2}};
        out.check("second-phase settle time within the predicted bracket", c2, two->second.settle_time,
                  {{"lower", two->second_prediction.lower}, {"upper_exclusive", two->second_prediction.upper}});
    }
    out.add_json("prediction.json", pj);
    out.check("settle time within the predicted bracket", contained, first.settle_time,
              {{"lower", pred.lower}, {"upper_exclusive", pred.upper}});

    // neuron 2 gains U2 - U1 per cycle while neuron 1 is still firing
    const double step = sc.challenger - sc.incumbent;
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * sc.challenger;
    double worst = 0.0;
    std::size_t increments = 0;
    const auto& grid = first.challenger_grid;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)
        if (grid[k] < sc.incumbent)
        {
            worst = std::max(worst, std::abs((grid[k + 1] - grid[k]) - step));
            ++increments;
        }
    out.check("per-cycle increment equals U2 - U1", worst <= slack,
              {{"max_abs_deviation", worst}, {"increments", increments}}, {{"absolute", slack}});

    const auto& last = first.samples.back();
    const bool final_ok = std::abs(last.f1) <= p.tol && std::abs(last.f2 - sc.challenger) <= p.tol;
    out.check("final state is the central-case winner", final_ok, {{"f1", last.f1}, {"f2", last.f2}},
              {{"absolute", p.tol}});
    return out;
}

// ---------------------------------------------------------------- random-mi

struct RandomMiParams
{
    RandomMISpec spec;
    double tol = 1e-8;
    std::optional<std::uint64_t> monte_carlo_samples;
};

inline RandomMiParams parse_random_mi(Reader& r)
{
    RandomMiParams p;
    p.spec.mean_uninhibited = r.numbers("U_bar");
    if (p.spec.mean_uninhibited.empty() && r.has("U_bar"))
        r.error("U_bar", "need at least one alternative");
    p.spec.lambda = r.number("lambda");
    if (!(p.spec.lambda > 0.0))
        r.error("lambda", "lambda must be > 0 (precision of the logistic noise)");
    p.tol = r.number("tol", p.tol);
    detail::require_positive(r, "tol", p.tol);
    if (auto mc = r.object("monte_carlo"))
    {
        const auto n = mc->integer("samples");
        if (n < 100000)
            mc->error("samples", "must be >= 100000");
        p.monte_carlo_samples = static_cast<std::uint64_t>(std::max<std::int64_t>(n, 0));
        mc->finish();
    }
    return p;
}

inline Outputs run_random_mi(const RandomMiParams& p, const RunContext& ctx)
{
    Outputs out;
    const auto& u = p.spec.mean_uninhibited;
    const double lam = p.spec.lambda;
    const FixedPointSolution sol = solve_random_mi(p.spec, 1.0);  // residual is checked below
    const double top = *std::max_element(u.begin(), u.end());
    const bool unique_top = std::count(u.begin(), u.end(), top) == 1;

    std::string method = "none";
    std::vector<double> approx;
    json diag{{"m", sol.m}, {"gap", sol.gap}, {"residual", sol.residual}, {"lambda", lam}};
    if (top > 0.0 && unique_top)
    {
        const PositiveApproximation a = approx_probabilities_positive(p.spec);
        method = "positive";
        approx = a.probability;
        diag["omega"] = a.omega;
        diag["omega_reliable"] = a.reliable;
        if (!a.reliable)
            out.warnings.push_back("omega > 0.1: positive-case approximation is outside its small-omega regime");
        if (a.omega < 0.01)
        {
            double worst = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                worst = std::max(worst, detail::relative_error(approx[i], sol.probability[i]));
            out.check("positive-case approximation agrees with the exact solve", worst <= 0.01,
                      {{"max_relative_error", worst}, {"omega", a.omega}}, {{"relative", 0.01}});
        }
    }
    else if (top < 0.0)
    {
        approx = approx_probabilities_negative(p.spec);
        method = "negative";
        double worst = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            worst = std::max(worst, detail::relative_error(approx[i], sol.probability[i]));
        diag["negative_max_relative_error"] = worst;
        if (top <= -2.0 / lam)
            out.check("negative-case approximation agrees with the exact solve", worst <= 0.05,
                      {{"max_relative_error", worst}}, {{"relative", 0.05}});
        if (top <= -5.0 / lam)
        {
            const auto logit = logit_probabilities(p.spec);
            double w = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                w = std::max(w, detail::relative_error(logit[i], sol.probability[i]));
            out.check("multinomial logit recovered", w <= 0.01, {{"max_relative_error", w}}, {{"relative", 0.01}});
        }
    }
    diag["approximation"] = method;

    CsvTable t({"alternative", "U_bar", "f_bar", "P", "P_approx", "method"});
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        auto row = t.row();
        row << i << u[i] << sol.f_bar[i] << sol.probability[i];
        if (approx.empty())
            row << "";
        else
            row << approx[i];
        row << method;
    }
    out.files["random_mi.csv"] = t.str();

    out.check("m-equation solution satisfies the componentwise system", sol.residual <= p.tol,
              {{"residual", sol.residual}}, {{"absolute", p.tol}});

    if (p.monte_carlo_samples)
    {
        const MonteCarloCheck mc = monte_carlo_check(p.spec, sol, *p.monte_carlo_samples, ctx.seed, ctx.jobs);
        json est = json::array();
        for (std::size_t i = 0; i < mc.alternatives.size(); ++i)
        {
            const auto& e = mc.alternatives[i];
            est.push_back({{"estimate", e.estimate}, {"std_error", e.std_error}, {"target", e.target}});
            out.check("Monte Carlo mean frequency of alternative " + std::to_string(i), e.within(3.0),
                      {{"z", e.z_score()}}, {{"standard_errors", 3}});
        }
        // sample variance of logistic draws has standard error sigma^2 sqrt(3.2 / n)
        const double n = static_cast<double>(*p.monte_carlo_samples);
        const double var_se = mc.noise_variance_expected * std::sqrt(3.2 / n);
        const double z = (mc.noise_variance - mc.noise_variance_expected) / var_se;
        out.check("noise variance matches the inverse-scale convention", std::abs(z) <= 4.0,
                  {{"sample_variance", mc.noise_variance}, {"expected", mc.noise_variance_expected}, {"z", z}},
                  {{"standard_errors", 4}});
        diag["monte_carlo"] = {{"samples", *p.monte_carlo_samples}, {"seed", ctx.seed}, {"estimates", std::move(est)}};
    }
    out.add_json("random_mi.json", diag);
    return out;
}

// ---------------------------------------------------------------- hicks

struct HicksParams
{
    double mean_uninhibited = 0.0;
    double lambda = 1.0;
    int n_min = 2;
    int n_max = 50;
    double eps0 = 0.0;
    double fd_step = 1e-4;
    double slope_tolerance = 1e-6;
};

inline HicksParams parse_hicks(Reader& r)
{
    HicksParams p;
    p.mean_uninhibited = r.number("U_bar");
    p.lambda = r.number("lambda");
    if (!(p.lambda > 0.0))
        r.error("lambda", "lambda must be > 0 (precision of the logistic noise)");
    p.n_min = static_cast<int>(r.integer("N_min", p.n_min));
    p.n_max = static_cast<int>(r.integer("N_max", p.n_max));
    if (p.n_min < 2)
        r.error("N_min", "must be >= 2");
    if (p.n_max < p.n_min)
        r.error("N_max", "must be >= N_min");
    if (p.n_max > 100000)
        r.error("N_max", "must be <= 100000");
    p.eps0 = r.number("eps0", p.eps0);
    detail::require_non_negative(r, "eps0", p.eps0);
    p.fd_step = r.number("fd_step", p.fd_step);
    if (!(p.fd_step > 0.0 && p.fd_step < 0.5))
        r.error("fd_step", "must lie in (0, 0.5)");
    p.slope_tolerance = r.number("slope_tolerance", p.slope_tolerance);
    detail::require_positive(r, "slope_tolerance", p.slope_tolerance);
    return p;
}

inline Outputs run_hicks(const HicksParams& p, const RunContext&)
{
    Outputs out;
    const auto rows = hicks_law(p.mean_uninhibited, p.lambda, p.n_min, p.n_max, p.eps0, p.fd_step);
    CsvTable t({"N", "f_bar", "T", "dTdN_analytic", "dTdN_fd"});
    double worst = 0.0;
    bool monotone = true;
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        const auto& h = rows[k];
        t.row() << h.alternatives << h.f_bar << h.response_time << h.slope_analytic << h.slope_finite_difference;
        worst = std::max(worst, detail::relative_error(h.slope_finite_difference, h.slope_analytic));
        if (k > 0)
            monotone = monotone && h.f_bar < rows[k - 1].f_bar && h.response_time > rows[k - 1].response_time;
    }
    out.files["hicks.csv"] = t.str();
    out.check("analytic slope matches finite differences", worst <= p.slope_tolerance, {{"max_relative_error", worst}},
              {{"relative", p.slope_tolerance}});
    out.check("response time increases with the number of alternatives", monotone, rows.size(), nullptr);
    return out;
}

// ---------------------------------------------------------------- nu-decide

struct Expectation
{
    bool inaction = false;
    std::string process;
    std::string action;
};

struct NuDecideParams
{
    DecisionProblem problem;
    std::optional<Expectation> expect;
};

inline NuDecideParams parse_nu_decide(Reader& r)
{
    NuDecideParams p;
    DecisionProblem& pr = p.problem;
    pr.processes = r.strings("processes");
    pr.actions = r.strings("actions");
    const auto states = r.strings("states");
    pr.states = states.size();

    auto index_of = [](const std::vector<std::string>& names, const std::string& s) -> std::optional<std::size_t> {
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - names.begin());
    };
    auto check_unique = [&](const std::vector<std::string>& names, const std::string& key) {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (index_of(names, names[k]) != k)
                r.error(key, "duplicate name '" + names[k] + "'");
    };
    check_unique(pr.processes, "processes");
    check_unique(pr.actions, "actions");
    check_unique(states, "states");
    if (pr.actions.empty() && r.has("actions"))
        r.error("actions", "empty action set");

    // consequence names in first-seen order become the utility table columns
    std::vector<std::string> consequences;
    const json* cons = r.child("consequence");
    if (!cons || !cons->is_object())
        r.error("consequence", "expected an object mapping each action to one consequence per state");
    else
    {
        for (const auto& item : cons->items())
            if (!index_of(pr.actions, item.key()))
                r.error("consequence." + item.key(), "unknown action");
        for (const auto& a : pr.actions)
        {
            std::vector<std::size_t> row;
            const std::string key = "consequence." + a;
            if (!cons->contains(a) || !(*cons)[a].is_array() || (*cons)[a].size() != states.size())
            {
                r.error(key, "expected one consequence name per state");
                pr.consequence.push_back(std::vector<std::size_t>(states.size(), 0));
                continue;
            }
            for (const auto& c : (*cons)[a])
            {
                if (!c.is_string())
                {
                    r.error(key, "consequences must be names");
                    row.push_back(0);
                    continue;
                }
                auto idx = index_of(consequences, c.get<std::string>());
                if (!idx)
                {
                    consequences.push_back(c.get<std::string>());
                    idx = consequences.size() - 1;
                }
                row.push_back(*idx);
            }
            pr.consequence.push_back(std::move(row));
        }
    }

    if (auto util = r.object("utility"))
    {
        for (const auto& proc : pr.processes)
        {
            std::vector<double> table(consequences.size(), 0.0);
            if (auto pu = util->object(proc))
            {
                for (std::size_t c = 0; c < consequences.size(); ++c)
                {
                    if (pu->has(consequences[c]))
                        table[c] = pu->number(consequences[c]);
                    else
                        pu->error(consequences[c], "missing utility for this consequence");
                }
                pu->finish();
            }
            else
                util->error(proc, "missing utility table for this process");
            pr.utility.push_back(std::move(table));
        }
        util->finish();
    }
    else
        r.error("utility", "required object is missing");

    if (auto ass = r.object("assessment"))
    {
        for (const auto& proc : pr.processes)
        {
            std::vector<ActionAssessment> row;
            auto pa = ass->object(proc);
            if (!pa)
                ass->error(proc, "missing assessment for this process");
            for (const auto& a : pr.actions)
            {
                ActionAssessment w;
                if (pa)
                {
                    if (auto wa = pa->object(a))
                    {
                        w.theta = wa->number("theta", 1.0);
                        w.phi = wa->number("phi", 0.0);
                        w.probabilities = wa->numbers("probabilities");
                        if (w.probabilities.size() != states.size())
                            wa->error("probabilities", "need one probability per state");
                        wa->finish();
                    }
                    else
                        pa->error(a, "missing assessment for this action");
                }
                row.push_back(std::move(w));
            }
            if (pa)
                pa->finish();
            pr.assessment.push_back(std::move(row));
        }
        ass->finish();
    }
    else
        r.error("assessment", "required object is missing");

    if (auto e = r.object("expect"))
    {
        Expectation x;
        x.inaction = e->boolean("inaction", false);
        x.process = e->string("process", "");
        x.action = e->string("action", "");
        if (!x.inaction && (x.process.empty() || x.action.empty()))
            e->error("", "give inaction: true or both process and action");
        if (!x.process.empty() && !index_of(pr.processes, x.process))
            e->error("process", "unknown process");
        if (!x.action.empty() && !index_of(pr.actions, x.action))
            e->error("action", "unknown action");
        p.expect = x;
        e->finish();
    }
    if (r.diagnostics().empty())
        detail::guard(r.diagnostics(), r.path(), [&] { pr.validate(); });
    return p;
}

inline json decision_json(const DecisionProblem& pr, const Decision& d)
{
    if (const auto* c = std::get_if<Chosen>(&d))
        return {{"chosen", {{"process", pr.processes[c->process]}, {"action", pr.actions[c->action]}, {"value", c->value}}}};
    return {{"inaction", {{"best_value", std::get<Inaction>(d).best_value}}}};
}

inline Outputs run_nu_decide(const NuDecideParams& p, const RunContext&)
{
    Outputs out;
    const DecisionProblem& pr = p.problem;
    CsvTable t({"process", "action", "value"});
    for (std::size_t q = 0; q < pr.processes.size(); ++q)
        for (std::size_t a = 0; a < pr.actions.size(); ++a)
            t.row() << pr.processes[q] << pr.actions[a] << pr.value(q, a);
    out.files["values.csv"] = t.str();
    const Decision d = nu_decide(pr);
    const json dj = decision_json(pr, d);
    out.add_json("decision.json", dj);
    if (p.expect)
    {
        bool ok = false;
        if (p.expect->inaction)
            ok = std::holds_alternative<Inaction>(d);
        else if (const auto* c = std::get_if<Chosen>(&d))
            ok = pr.processes[c->process] == p.expect->process && pr.actions[c->action] == p.expect->action;
        json expected = p.expect->inaction ? json{{"inaction", true}}
                                           : json{{"process", p.expect->process}, {"action", p.expect->action}};
        out.check("decision matches expectation", ok, dj, expected);
    }
    return out;
}

// ---------------------------------------------------------------- pipeline

struct PipelineParams
{
    NeuronParams neuron;
    std::vector<double> review_currents;
    std::vector<std::vector<double>> currents;  ///< [h][i], per-spike current from review neuron h into MI neuron i
    BetaPolicy policy = BetaPolicy::midpoint;
    double duration = 0.0;
    double dt = 0.01;
    double warmup_fraction = 0.2;
    double check_tolerance = 1e-9;
};

inline PipelineParams parse_pipeline(Reader& r)
{
    PipelineParams p;
    p.neuron = detail::read_optional_neuron(r, "neuron");
    p.review_currents = r.numbers("review_currents");
    if (p.review_currents.empty() && r.has("review_currents"))
        r.error("review_currents", "need at least one review neuron");
    p.currents = r.matrix("currents");
    if (p.currents.size() != p.review_currents.size())
        r.error("currents", "need one row per review neuron");
    std::size_t n = p.currents.empty() ? 0 : p.currents.front().size();
    if (n == 0 && !p.currents.empty())
        r.error("currents", "need at least one MI neuron per row");
    for (std::size_t h = 0; h < p.currents.size(); ++h)
        if (p.currents[h].size() != n)
            r.error("currents[" + std::to_string(h) + "]", "rows must have equal length");
    for (std::size_t i = 0; i < n; ++i)
    {
        bool connected = false;
        for (const auto& row : p.currents)
            connected = connected || (i < row.size() && row[i] != 0.0);
        if (!connected)
            r.error("currents", "MI neuron " + std::to_string(i) + " receives no review input (all A_hi = 0)");
    }
    p.policy = detail::read_beta_policy(r);
    p.duration = r.number("duration");
    detail::require_positive(r, "duration", p.duration);
    p.dt = r.number("dt", p.dt);
    detail::require_positive(r, "dt", p.dt);
    p.warmup_fraction = r.number("warmup_fraction", p.warmup_fraction);
    if (!(p.warmup_fraction >= 0.0 && p.warmup_fraction < 1.0))
        r.error("warmup_fraction", "must lie in [0, 1)");
    p.check_tolerance = r.number("check_tolerance", p.check_tolerance);
    detail::require_positive(r, "check_tolerance", p.check_tolerance);
    return p;
}

inline Outputs run_pipeline(const PipelineParams& p, const RunContext&)
{
    Outputs out;
    const std::size_t h_count = p.review_currents.size();
    const std::size_t n = p.currents.front().size();
    const RateCoefficients c = derive_coefficients(p.neuron, p.policy);

    // review stage: isolated neurons under constant drive
    SpikingNetwork review;
    for (double current : p.review_currents)
    {
        review.neurons.push_back(p.neuron);
        review.external.push_back(ExternalCurrentProfile::constant(current));
    }
    SimulationOptions opt;
    opt.duration = p.duration;
    opt.dt = p.dt;
    const TimeWindow window{p.warmup_fraction * p.duration, p.duration};
    const SpikeRecord rec = simulate(review, opt);
    std::vector<double> f_review;
    CsvTable rt({"neuron_id", "current", "f_simulated", "f_model"});
    for (std::size_t h = 0; h < h_count; ++h)
    {
        f_review.push_back(detail::window_frequency(rec.spike_times[h], window));
        rt.row() << h << p.review_currents[h] << f_review.back() << rate_response(c, RateInput{p.review_currents[h], {}});
    }
    out.files["review.csv"] = rt.str();

    // MI stage: uninhibited frequencies from the rate model, then the central case
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        RateInput in;
        for (std::size_t h = 0; h < h_count; ++h)
            in.upstream.push_back({f_review[h], p.currents[h][i], 0.0});
        u[i] = uninhibited_frequency(c, in);
    }
    const NeuralUtilityTerms terms = relabel(f_review, p.currents, std::vector<RateCoefficients>(n, c));
    const std::vector<double> u_nu = recombine(terms);
    double identity = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        identity = std::max(identity, std::abs(u_nu[i] - u[i]) / std::max(1.0, std::abs(u[i])));
    out.check("relabel then recombine reproduces the uninhibited frequencies", identity <= 1e-12,
              {{"max_relative_difference", identity}}, {{"relative", 1e-12}});

    const MINetwork net = MINetwork::central(u);
    const SteadyStateReport rep = solve_steady_state(net);
    out.files["mi.csv"] = steady_state_csv(net, rep.primary());

    const DecisionProblem problem = problem_from_terms(terms);
    json summary{{"U", u}, {"alpha", c.alpha}, {"beta", c.beta}};
    try
    {
        const CentralChoice choice = central_case_choice(u);
        const Decision d = nu_decide(problem);
        summary["central_case"] = detail::choice_json(choice);
        summary["decision"] = decision_json(problem, d);
        out.check("neural-utility decision agrees with the central-case rule", consistency_check(terms, 1e-12),
                  summary["decision"], summary["central_case"]);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto* w = std::get_if<Winner>(&choice);
            err = std::max(err, std::abs(rep.primary().f[i] - (w && w->index == i ? w->frequency : 0.0)));
        }
        out.check("steady state agrees with the central-case rule", err <= p.check_tolerance,
                  {{"max_abs_difference", err}}, {{"absolute", p.check_tolerance}});
    }
    catch (const TieError& e)
    {
        out.warnings.push_back(e.what());
    }
    out.add_json("pipeline.json", summary);
    return out;
}

// ---------------------------------------------------------------- registry

using KindParams = std::variant<SpikesParams, FiSweepParams, MiSteadyParams, MiRegimesParams, ResponseTimeParams,
                                RandomMiParams, HicksParams, NuDecideParams, PipelineParams>;

struct KindInfo
{
    const char* name;
    const char* summary;
};

inline const std::vector<KindInfo>& kinds()
{
    static const std::vector<KindInfo> list{
        {"spikes", "integrate-and-fire network simulation: spike times, optional potential trace"},
        {"fi-sweep", "single-neuron frequency over a current grid against the f-I bounds"},
        {"mi-steady", "steady states of a mutual-inhibition network"},
        {"mi-regimes", "loser-wins and parallel-activity two-neuron constructions"},
        {"response-time", "delayed two-neuron transition against the response-time bracket"},
        {"random-mi", "choice probabilities of mutual inhibition under logistic noise"},
        {"hicks", "response time against the number of identical alternatives"},
        {"nu-decide", "neural-utility decision over processes, actions and states"},
        {"pipeline", "spiking review stage through the rate model to the MI choice and NU rule"},
    };
    return list;
}

inline std::optional<KindParams> parse_kind(const std::string& kind, Reader& r)
{
    if (kind == "spikes")
        return parse_spikes(r);
    if (kind == "fi-sweep")
        return parse_fi_sweep(r);
    if (kind == "mi-steady")
        return parse_mi_steady(r);
    if (kind == "mi-regimes")
        return parse_mi_regimes(r);
    if (kind == "response-time")
        return parse_response_time(r);
    if (kind == "random-mi")
        return parse_random_mi(r);
    if (kind == "hicks")
        return parse_hicks(r);
    if (kind == "nu-decide")
        return parse_nu_decide(r);
    if (kind == "pipeline")
        return parse_pipeline(r);
    return std::nullopt;
}

inline Outputs run_kind(const KindParams& params, const RunContext& ctx)
{
    return std::visit(
        [&](const auto& p) -> Outputs {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, SpikesParams>)
                return run_spikes(p, ctx);
            else if constexpr (std::is_same_v<P, FiSweepParams>)
                return run_fi_sweep(p, ctx);
            else if constexpr (std::is_same_v<P, MiSteadyParams>)
                return run_mi_steady(p, ctx);
            else if constexpr (std::is_same_v<P, MiRegimesParams>)
                return run_mi_regimes(p, ctx);
            else if constexpr (std::is_same_v<P, ResponseTimeParams>)
                return run_response_time(p, ctx);
            else if constexpr (std::is_same_v<P, RandomMiParams>)
                return run_random_mi(p, ctx);
            else if constexpr (std::is_same_v<P, HicksParams>)
                return run_hicks(p, ctx);
            else if constexpr (std::is_same_v<P, NuDecideParams>)
                return run_nu_decide(p, ctx);
            else
                return run_pipeline(p, ctx);
        },
        params);
}

} // namespace neurochoice::experiment

#endif // NEUROCHOICE_EXPERIMENT_KINDS_HPP
