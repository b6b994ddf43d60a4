#ifndef NEUROCHOICE_EXPERIMENT_REPORT_HPP
#define NEUROCHOICE_EXPERIMENT_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../errors.hpp"

namespace neurochoice::experiment
{

using json = nlohmann::json;

enum class ToleranceProfile
{
    standard,  ///< quality flags are reported as warnings
    strict     ///< quality flags fail the run
};

inline ToleranceProfile parse_tolerance_profile(const std::string& s)
{
    if (s == "default")
        return ToleranceProfile::standard;
    if (s == "strict")
        return ToleranceProfile::strict;
    throw PreconditionError("unknown tolerance profile '" + s + "' (expected strict or default)");
}

inline std::string to_string(ToleranceProfile p)
{
    return p == ToleranceProfile::strict ? "strict" : "default";
}

struct RunContext
{
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    ToleranceProfile profile = ToleranceProfile::standard;
};

struct Check
{
    std::string name;
    bool passed = false;
    json measured;
    json tolerance;
    std::string detail;

    json to_json() const
    {
        json j{{"name", name}, {"passed", passed}, {"measured", measured}, {"tolerance", tolerance}};
        if (!detail.empty())
            j["detail"] = detail;
        return j;
    }
};

/// Everything a run produces, held in memory until the run has finished.
struct Outputs
{
    std::map<std::string, std::string> files;
    std::vector<Check> checks;
    std::vector<std::string> warnings;

    void check(std::string name, bool passed, json measured, json tolerance, std::string detail = {})
    {
        checks.push_back({std::move(name), passed, std::move(measured), std::move(tolerance), std::move(detail)});
    }

    void add_json(const std::string& name, const json& j) { files[name] = j.dump(2) + "\n"; }
};

} // namespace neurochoice::experiment

#endif // NEUROCHOICE_EXPERIMENT_REPORT_HPP
