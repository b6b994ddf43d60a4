#ifndef NEUROCHOICE_NEURAL_UTILITY_HPP
#define NEUROCHOICE_NEURAL_UTILITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "mi_network.hpp"
#include "rate_model.hpp"

namespace neurochoice
{

/// Utility-style reading of one MI neuron's inputs from the review stage.
struct NeuronTerms
{
    double theta;             ///< alpha_i sum_h |A_hi|
    double phi;               ///< alpha_i beta_i
    std::vector<double> pi;   ///< |A_hi| / sum_h |A_hi|
    std::vector<double> u;    ///< f_h sign(A_hi)
};

struct NeuralUtilityTerms
{
    std::vector<NeuronTerms> neurons;
};

/**
 * Relabels the review-stage drive of each MI neuron. currents[h][i] is A_hi,
 * the current review neuron h induces in MI neuron i per spike. MI neurons
 * take no direct external current here.
 */
inline NeuralUtilityTerms relabel(const std::vector<double>& review_frequencies,
                                  const std::vector<std::vector<double>>& currents,
                                  const std::vector<RateCoefficients>& coeffs)
{
    const std::size_t h_count = review_frequencies.size();
    const std::size_t n = coeffs.size();
    detail::require(h_count > 0, "relabel: need at least one review neuron");
    detail::require(n > 0, "relabel: need at least one MI neuron");
    detail::require(currents.size() == h_count, "relabel: currents must have one row per review neuron");
    for (const auto& row : currents)
    {
        detail::require(row.size() == n, "relabel: currents must have one column per MI neuron");
        for (double a : row)
            detail::require(std::isfinite(a), "relabel: currents must be finite");
    }
    for (double f : review_frequencies)
        detail::require(std::isfinite(f) && f >= 0.0, "relabel: review frequencies must be >= 0");

    NeuralUtilityTerms out;
    for (std::size_t i = 0; i < n; ++i)
    {
        coeffs[i].validate();
        double total = 0.0;
        for (std::size_t h = 0; h < h_count; ++h)
            total += std::abs(currents[h][i]);
        if (total == 0.0)
            throw PreconditionError("relabel: MI neuron " + std::to_string(i) +
                                    " receives no review input (all A_hi = 0)");
        NeuronTerms t{coeffs[i].alpha * total, coeffs[i].alpha * coeffs[i].beta, {}, {}};
        for (std::size_t h = 0; h < h_count; ++h)
        {
            const double a = currents[h][i];
            t.pi.push_back(std::abs(a) / total);
            t.u.push_back(a > 0.0 ? review_frequencies[h] : (a < 0.0 ? -review_frequencies[h] : 0.0));
        }
        out.neurons.push_back(std::move(t));
    }
    return out;
}

/// U_i = theta_i sum_h pi_hi u_hi - phi_i.
inline double recombine(const NeuronTerms& t)
{
    double expected = 0.0;
    for (std::size_t h = 0; h < t.pi.size(); ++h)
        expected += t.pi[h] * t.u[h];
    return t.theta * expected - t.phi;
}

inline std::vector<double> recombine(const NeuralUtilityTerms& terms)
{
    std::vector<double> u;
    for (const auto& t : terms.neurons)
        u.push_back(recombine(t));
    return u;
}

/// Salience, cost and subjective state probabilities one process attaches to one action.
struct ActionAssessment
{
    double theta = 1.0;
    double phi = 0.0;
    std::vector<double> probabilities;  ///< over states
};

/**
 * Several processes value the same action set over finite states.
 * consequence[a][s] indexes a consequence; utility[p][c] is process p's
 * utility of consequence c; assessment[p][a] holds theta, phi and pi.
 */
struct DecisionProblem
{
    std::vector<std::string> processes;
    std::vector<std::string> actions;
    std::size_t states = 0;
    std::vector<std::vector<std::size_t>> consequence;
    std::vector<std::vector<double>> utility;
    std::vector<std::vector<ActionAssessment>> assessment;

    void validate() const
    {
        detail::require(!processes.empty(), "DecisionProblem: need at least one process");
        detail::require(!actions.empty(), "DecisionProblem: empty action set");
        detail::require(states > 0, "DecisionProblem: need at least one state");
        detail::require(consequence.size() == actions.size(), "DecisionProblem: consequence needs one row per action");
        detail::require(utility.size() == processes.size(), "DecisionProblem: utility needs one table per process");
        detail::require(assessment.size() == processes.size(), "DecisionProblem: assessment needs one row per process");
        for (const auto& row : consequence)
        {
            detail::require(row.size() == states, "DecisionProblem: consequence needs one entry per state");
            for (std::size_t p = 0; p < processes.size(); ++p)
                for (std::size_t c : row)
                    detail::require(c < utility[p].size(), "DecisionProblem: consequence index outside the utility table");
        }
        for (const auto& table : utility)
            for (double v : table)
                detail::require(std::isfinite(v), "DecisionProblem: utilities must be finite");
        for (const auto& row : assessment)
        {
            detail::require(row.size() == actions.size(), "DecisionProblem: assessment needs one entry per action");
            for (const auto& w : row)
            {
                detail::require(std::isfinite(w.theta) && w.theta > 0.0, "DecisionProblem: theta must be > 0");
                detail::require(std::isfinite(w.phi) && w.phi >= 0.0, "DecisionProblem: phi must be >= 0");
                detail::require(w.probabilities.size() == states, "DecisionProblem: one probability per state");
                double sum = 0.0;
                for (double q : w.probabilities)
                {
                    detail::require(q >= 0.0 && q <= 1.0, "DecisionProblem: probabilities must lie in [0, 1]");
                    sum += q;
                }
                detail::require(std::abs(sum - 1.0) <= 1e-9, "DecisionProblem: probabilities must sum to 1");
            }
        }
    }

    /// theta_p(a) sum_s pi_p(a, s) u_p(c(a, s)) - phi_p(a)
    double value(std::size_t p, std::size_t a) const
    {
        const ActionAssessment& w = assessment[p][a];
        double expected = 0.0;
        for (std::size_t s = 0; s < states; ++s)
            expected += w.probabilities[s] * utility[p][consequence[a][s]];
        return w.theta * expected - w.phi;
    }
};

struct Chosen
{
    std::size_t process;
    std::size_t action;
    double value;
};

using Decision = std::variant<Chosen, Inaction>;

/// Best (process, action) pair if its value is positive, inaction otherwise.
inline Decision nu_decide(const DecisionProblem& problem)
{
    problem.validate();
    Chosen best{0, 0, problem.value(0, 0)};
    bool tied = false;
    for (std::size_t p = 0; p < problem.processes.size(); ++p)
        for (std::size_t a = 0; a < problem.actions.size(); ++a)
        {
            if (p == 0 && a == 0)
                continue;
            const double v = problem.value(p, a);
            if (v > best.value)
            {
                best = {p, a, v};
                tied = false;
            }
            else if (v == best.value)
            {
                tied = true;
            }
        }
    if (best.value <= 0.0)
        return Inaction{best.value};
    if (tied)
        throw TieError("nu_decide: the best value is attained by more than one (process, action) pair");
    return best;
}

/**
 * Single-process problem equivalent to an MI stage fed by review neurons:
 * one action per MI neuron, one state per review neuron, and a distinct
 * consequence for each (action, state) whose utility is u_hi.
 */
inline DecisionProblem problem_from_terms(const NeuralUtilityTerms& terms)
{
    detail::require(!terms.neurons.empty(), "problem_from_terms: no MI neurons");
    const std::size_t n = terms.neurons.size();
    const std::size_t h_count = terms.neurons.front().pi.size();
    DecisionProblem pr;
    pr.processes = {"mi"};
    pr.states = h_count;
    pr.utility.resize(1);
    pr.assessment.resize(1);
    for (std::size_t i = 0; i < n; ++i)
    {
        const NeuronTerms& t = terms.neurons[i];
        detail::require(t.pi.size() == h_count && t.u.size() == h_count,
                        "problem_from_terms: neurons disagree on the number of review inputs");
        pr.actions.push_back("neuron_" + std::to_string(i));
        std::vector<std::size_t> row;
        for (std::size_t h = 0; h < h_count; ++h)
        {
            row.push_back(pr.utility[0].size());
            pr.utility[0].push_back(t.u[h]);
        }
        pr.consequence.push_back(std::move(row));
        pr.assessment[0].push_back({t.theta, t.phi, t.pi});
    }
    return pr;
}

/// True when the NU rule and the central-case rule agree on index and value (or both pick inaction).
inline bool consistency_check(const NeuralUtilityTerms& terms, double value_tol = 1e-12)
{
    const DecisionProblem pr = problem_from_terms(terms);
    const std::vector<double> u = recombine(terms);
    const Decision nu = nu_decide(pr);
    const CentralChoice mi = central_case_choice(u);
    if (std::holds_alternative<Inaction>(nu) || std::holds_alternative<Inaction>(mi))
        return std::holds_alternative<Inaction>(nu) && std::holds_alternative<Inaction>(mi);
    const auto& c = std::get<Chosen>(nu);
    const auto& w = std::get<Winner>(mi);
    const double scale = std::max(1.0, std::abs(w.frequency));
    return c.action == w.index && std::abs(c.value - w.frequency) <= value_tol * scale;
}

} // namespace neurochoice

#endif // NEUROCHOICE_NEURAL_UTILITY_HPP
