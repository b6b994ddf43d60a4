// Command-line front end: run, validate and list scenario kinds.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "neurochoice/experiment/runner.hpp"

namespace fs = std::filesystem;
namespace ex = neurochoice::experiment;

namespace
{

enum ExitCode
{
    exit_ok = 0,
    exit_check_failed = 1,
    exit_invalid = 2
};

struct Job
{
    fs::path file;
    fs::path out_dir;
    std::string message;
    int status = exit_ok;
};

void print_diagnostics(const fs::path& file, const ex::Diagnostics& diag)
{
    for (const auto& d : diag)
        std::cerr << file.string() << ": " << d.str() << "\n";
}

fs::path output_dir(const fs::path& file, const std::optional<std::string>& scenario_out, const std::string& out_flag,
                    bool many)
{
    if (!out_flag.empty())
        return many ? fs::path(out_flag) / file.stem() : fs::path(out_flag);
    if (scenario_out)
        return fs::path(*scenario_out);
    return fs::path("out") / file.stem();
}

void run_one(Job& job, const std::string& out_flag, bool many, const ex::RunOptions& opt)
{
    const ex::LoadResult loaded = ex::load_scenario_file(job.file);
    if (!loaded.scenario)
    {
        for (const auto& d : loaded.diagnostics)
            job.message += job.file.string() + ": " + d.str() + "\n";
        job.message += "INVALID " + job.file.string() + " (nothing written)\n";
        job.status = exit_invalid;
        return;
    }
    const ex::Scenario& sc = *loaded.scenario;
    job.out_dir = output_dir(job.file, sc.output, out_flag, many);
    ex::RunResult res;
    try
    {
        res = ex::run_scenario(sc, opt);
    }
    catch (const std::exception& e)
    {
        job.message = job.file.string() + ": " + e.what() + "\nERROR " + job.file.string() + " (nothing written)\n";
        job.status = exit_invalid;
        return;
    }
    try
    {
        ex::write_outputs(res.outputs, job.out_dir);
    }
    catch (const std::exception& e)
    {
        job.message = job.file.string() + ": " + e.what() + "\n";
        job.status = exit_invalid;
        return;
    }

    std::size_t failed = 0;
    for (const auto& c : res.outputs.checks)
        if (!c.passed)
        {
            ++failed;
            job.message += "  failed: " + c.name + "\n";
        }
    for (const auto& w : res.outputs.warnings)
        job.message += "  warning: " + w + "\n";
    job.message = std::string(res.passed ? "PASS " : "FAIL ") + job.file.string() + " -> " + job.out_dir.string() +
                  " (" + std::to_string(res.outputs.checks.size() - failed) + "/" +
                  std::to_string(res.outputs.checks.size()) + " checks)\n" + job.message;
    job.status = res.passed ? exit_ok : exit_check_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Neural choice simulations: spiking neurons, mutual inhibition and random choice"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(neurochoice::version));

    std::vector<std::string> run_files;
    std::int64_t seed = -1;
    std::string out_flag;
    unsigned jobs = 1;
    std::string profile = "default";
    bool timing = false;
    auto* run = app.add_subcommand("run", "Run one or more scenario files");
    run->add_option("files", run_files, "Scenario JSON files")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the scenario seed")->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_flag, "Output directory (one subdirectory per file when several are given)");
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    run->add_option("--tolerance-profile", profile, "strict turns quality warnings into failures")
        ->check(CLI::IsMember({"strict", "default"}));
    run->add_flag("--timing", timing, "Record wall time in report.json");

    std::vector<std::string> validate_files;
    auto* validate = app.add_subcommand("validate", "Check scenario files without running them");
    validate->add_option("files", validate_files, "Scenario JSON files")->required()->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list-kinds", "List the scenario kinds");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed())
    {
        for (const auto& k : ex::kinds())
            std::cout << k.name << "\t" << k.summary << "\n";
        return exit_ok;
    }

    if (validate->parsed())
    {
        int status = exit_ok;
        for (const auto& f : validate_files)
        {
            const ex::LoadResult r = ex::load_scenario_file(f);
            if (r.diagnostics.empty())
            {
                std::cout << "OK " << f << "\n";
                continue;
            }
            print_diagnostics(f, r.diagnostics);
            std::cout << "INVALID " << f << " (" << r.diagnostics.size() << " problem"
                      << (r.diagnostics.size() == 1 ? "" : "s") << ")\n";
            status = exit_invalid;
        }
        return status;
    }

    ex::RunOptions opt;
    if (seed >= 0)
        opt.seed = static_cast<std::uint64_t>(seed);
    opt.profile = ex::parse_tolerance_profile(profile);
    opt.timing = timing;
    const bool many = run_files.size() > 1;
    // several files share the workers between scenarios; a single file gives them to its Monte Carlo
    opt.jobs = many ? 1 : jobs;

    std::vector<Job> work(run_files.size());
    for (std::size_t k = 0; k < run_files.size(); ++k)
        work[k].file = run_files[k];
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < work.size(); k = next++)
            run_one(work[k], out_flag, many, opt);
    };
    const unsigned threads = std::min<unsigned>(many ? jobs : 1, static_cast<unsigned>(work.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    int status = exit_ok;
    for (const auto& j : work)
    {
        (j.status == exit_ok ? std::cout : std::cerr) << j.message;
        status = std::max(status, j.status);
    }
    return status;
}
