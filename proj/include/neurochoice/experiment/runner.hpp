#ifndef NEUROCHOICE_EXPERIMENT_RUNNER_HPP
#define NEUROCHOICE_EXPERIMENT_RUNNER_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../version.hpp"
#include "kinds.hpp"
#include "report.hpp"
#include "schema.hpp"

namespace neurochoice::experiment
{

struct Scenario
{
    std::string kind;
    std::uint64_t seed = 0;
    std::optional<std::string> output;
    json document;  ///< the parsed file, echoed into the report
    KindParams params;
};

struct LoadResult
{
    std::optional<Scenario> scenario;
    Diagnostics diagnostics;
};

/// Parses and validates a scenario document without running it.
inline LoadResult load_scenario_text(const std::string& text)
{
    LoadResult res;
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        res.diagnostics.push_back(
            {"", "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col)});
        return res;
    }

    Reader top(doc, "", res.diagnostics);
    if (!res.diagnostics.empty())
        return res;
    const auto kind = top.opt_string("kind");
    if (!kind)
    {
        if (!top.has("kind"))
            top.error("kind", "required string is missing");
    }
    const auto seed = top.opt_integer("seed");
    if (seed && *seed < 0)
        top.error("seed", "must be >= 0");
    const auto output = top.opt_string("output");
    top.opt_string("description");
    auto params = top.object("parameters");
    if (!params && !top.has("parameters"))
        top.error("parameters", "required object is missing");
    top.finish();

    std::optional<KindParams> parsed;
    if (kind && params)
    {
        parsed = parse_kind(*kind, *params);
        if (!parsed)
            top.error("kind", "unknown kind '" + *kind + "' (see list-kinds)");
        else
            params->finish();
    }
    if (!res.diagnostics.empty() || !parsed)
        return res;
    res.scenario = Scenario{*kind, static_cast<std::uint64_t>(seed.value_or(0)), output, std::move(doc),
                            std::move(*parsed)};
    return res;
}

inline LoadResult load_scenario_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        LoadResult res;
        res.diagnostics.push_back({"", "cannot read " + path.string()});
        return res;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario_text(ss.str());
}

struct RunOptions
{
    std::optional<std::uint64_t> seed;  ///< overrides the scenario's seed
    unsigned jobs = 1;
    ToleranceProfile profile = ToleranceProfile::standard;
    bool timing = false;  ///< record wall time in the report (breaks byte-identical reruns)
};

struct RunResult
{
    Outputs outputs;
    json report;
    bool passed = false;
};

/// Runs a validated scenario entirely in memory; report.json is added to the outputs.
inline RunResult run_scenario(const Scenario& sc, const RunOptions& opt)
{
    RunContext ctx{opt.seed.value_or(sc.seed), std::max(1u, opt.jobs), opt.profile};
    const auto start = std::chrono::steady_clock::now();
    RunResult res;
    res.outputs = run_kind(sc.params, ctx);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Outputs& out = res.outputs;
    if (opt.profile == ToleranceProfile::strict)
        for (const auto& w : out.warnings)
            out.check("quality: " + w, false, nullptr, nullptr, "warnings fail under the strict profile");

    bool passed = true;
    json checks = json::array();
    for (const auto& c : out.checks)
    {
        checks.push_back(c.to_json());
        passed = passed && c.passed;
    }
    json files = json::array();
    for (const auto& [name, content] : out.files)
        files.push_back(name);
    files.push_back("report.json");

    res.report = {{"artifact", "neurochoice"},
                  {"version", version},
                  {"kind", sc.kind},
                  {"seed", ctx.seed},
                  {"tolerance_profile", to_string(opt.profile)},
                  {"scenario", sc.document},
                  {"checks", std::move(checks)},
                  {"warnings", out.warnings},
                  {"outputs", std::move(files)},
                  {"passed", passed}};
    if (opt.timing)
        res.report["wall_time_seconds"] = wall;
    res.passed = passed;
    out.add_json("report.json", res.report);
    return res;
}

/// Writes every output file into dir, creating it if needed.
inline void write_outputs(const Outputs& out, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : out.files)
    {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write " + (dir / name).string());
        f << content;
    }
}

} // namespace neurochoice::experiment

#endif // NEUROCHOICE_EXPERIMENT_RUNNER_HPP
