#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace polybloch::cli {

// Exit codes shared by all subcommands.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,      // parse error, unknown suite, invalid configuration
    kValidationFailed = 2,
    kIoError = 3,
    kViolations = 4,      // verify found inequality violations
};

struct JobConfig {
    std::size_t dim = 2;
    std::string phi_source;
    std::string psi_source;
    std::vector<double> delta_ladder{0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
    std::size_t sample_budget = 200000;
    unsigned refine_iters = 40;
    std::uint64_t seed = 0;
    std::string output_path; // empty: standard output
    std::string format = "json";
    bool record_runtime = false;
};

// Reads a JSON job file with any of the keys dim, phi, psi, delta_ladder,
// samples, refine_iters, seed, out, format. Missing keys keep `base` values.
JobConfig load_job_file(const std::string& path, JobConfig base = {});

std::vector<double> parse_ladder(const std::string& text);

int cmd_analyze(const JobConfig& config, std::ostream& out, std::ostream& err);

struct BlochJob {
    std::size_t dim = 2;
    std::string f_source;
    std::size_t sample_budget = 20000;
    unsigned refine_iters = 40;
    std::uint64_t seed = 0;
    std::string output_path;
    bool record_runtime = false;
};

int cmd_bloch(const BlochJob& job, std::ostream& out, std::ostream& err);

struct VerifyJob {
    std::string suite;          // lemma1 | lemma2 | norms | oracle | fm
    std::size_t trials = 0;     // 0: suite default
    std::uint64_t seed = 0;
    std::string output_path;
    bool record_runtime = false;
};

int cmd_verify(const VerifyJob& job, std::ostream& out, std::ostream& err);

// Full command line: `polybloch <analyze|bloch|verify> [flags]`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace polybloch::cli
