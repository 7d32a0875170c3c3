#include "polybloch/cli.hpp"

#include "polybloch/bloch.hpp"
#include "polybloch/error.hpp"
#include "polybloch/essential.hpp"
#include "polybloch/parallel.hpp"
#include "polybloch/report.hpp"
#include "polybloch/symbols.hpp"
#include "polybloch/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace polybloch::cli {

namespace {

constexpr const char* kToolName = "polybloch";

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json header(const char* command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = kToolName;
    j["version"] = POLYBLOCH_VERSION;
    j["command"] = command;
    return j;
}

// Wall time is opt-in so that default reports are byte-stable.
void stamp_runtime(Json& j, bool record, Clock::time_point start) {
    j["runtime_ms"] = record ? Json(elapsed_ms(start)) : Json(nullptr);
}

int emit(const std::string& text, const std::string& path, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
        out << text;
        out.flush();
        return out ? kOk : kIoError;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot open '" << path << "' for writing\n";
        return kIoError;
    }
    file << text;
    file.flush();
    if (!file) {
        err << "error: failed writing '" << path << "'\n";
        return kIoError;
    }
    return kOk;
}

void report_parse_error(std::ostream& err, const char* what, const std::string& source, const ParseError& e) {
    err << "error: cannot parse " << what << ": " << e.what() << "\n  " << source << "\n  "
        << std::string(std::min(e.position(), source.size()), ' ') << "^\n";
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("POLYBLOCH_SEED");
    if (!raw || !*raw) return std::nullopt;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(raw, &used);
        if (used != std::strlen(raw)) return std::nullopt;
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Json config_json(const JobConfig& c) {
    return Json{
        {"dim", c.dim},
        {"phi", c.phi_source},
        {"psi", c.psi_source},
        {"delta_ladder", c.delta_ladder},
        {"samples", c.sample_budget},
        {"refine_iters", c.refine_iters},
        {"seed", c.seed},
        {"format", c.format},
    };
}

struct SuiteRun {
    std::vector<InequalityReport> reports;
    Json config;
};

SuiteRun run_suite(const std::string& suite, std::size_t trials, std::uint64_t seed) {
    SuiteRun run;
    const std::vector<std::size_t> dims{1, 2, 3};
    if (suite == "lemma1") {
        const std::size_t t = trials ? trials : 10000;
        for (std::size_t n : dims) run.reports.push_back(check_lemma1(curated_family(n), t, seed));
        run.config = Json{{"trials_per_function", t}, {"dims", dims}};
    } else if (suite == "lemma2") {
        const std::size_t t = trials ? trials : 2000;
        for (std::size_t n : dims) {
            run.reports.push_back(check_lemma2(curated_family(n), 0.5, kDefaultRLadder, t, seed));
        }
        run.config = Json{{"points_per_r", t}, {"delta", 0.5}, {"r_ladder", kDefaultRLadder}, {"dims", dims}};
    } else if (suite == "norms") {
        const std::size_t t = trials ? trials : 10000;
        for (std::size_t n : dims) run.reports.push_back(check_equivalence_chain(curated_family(n), t, 5000, seed));
        run.config = Json{{"points_per_function", t}, {"estimate_budget", 5000}, {"dims", dims}};
    } else if (suite == "oracle") {
        const std::size_t t = trials ? trials : 100000;
        for (std::size_t n : dims) run.reports.push_back(check_direction_oracle(curated_family(n), 4, t, seed));
        run.config = Json{{"directions", t}, {"points_per_function", 4}, {"dims", dims}};
    } else if (suite == "fm") {
        const std::size_t t = trials ? trials : 20000;
        run.reports.push_back(check_extremal_family(kDefaultFmModuli, 2, t, seed));
        run.config = Json{{"budget", t}, {"moduli", kDefaultFmModuli}, {"dim", 2}};
    } else {
        throw DomainError("unknown suite '" + suite + "' (expected lemma1, lemma2, norms, oracle or fm)");
    }
    return run;
}

} // namespace

std::vector<double> parse_ladder(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("delta ladder: cannot read '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw DomainError("delta ladder: cannot read '" + item + "'");
        }
        out.push_back(v);
    }
    DeltaLadder check(out);
    return out;
}

JobConfig load_job_file(const std::string& path, JobConfig base) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open job file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("job file is not valid JSON: ") + e.what());
    }
    try {
        if (j.contains("dim")) base.dim = j.at("dim").get<std::size_t>();
        if (j.contains("phi")) base.phi_source = j.at("phi").get<std::string>();
        if (j.contains("psi")) base.psi_source = j.at("psi").get<std::string>();
        if (j.contains("delta_ladder")) base.delta_ladder = j.at("delta_ladder").get<std::vector<double>>();
        if (j.contains("samples")) base.sample_budget = j.at("samples").get<std::size_t>();
        if (j.contains("refine_iters")) base.refine_iters = j.at("refine_iters").get<unsigned>();
        if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) base.output_path = j.at("out").get<std::string>();
        if (j.contains("format")) base.format = j.at("format").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("job file field has the wrong type: ") + e.what());
    }
    return base;
}

int cmd_analyze(const JobConfig& config, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    if (config.format != "json" && config.format != "csv") {
        err << "error: --format must be json or csv\n";
        return kInputError;
    }
    if (config.sample_budget < 1000) {
        err << "error: --samples must be at least 1000\n";
        return kInputError;
    }
    std::optional<DeltaLadder> ladder;
    try {
        ladder.emplace(config.delta_ladder);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    std::optional<SymbolMap> phi;
    std::optional<SymbolMap> psi;
    try {
        phi = parse_map(config.phi_source, config.dim);
    } catch (const ParseError& e) {
        report_parse_error(err, "--phi", config.phi_source, e);
        return kInputError;
    }
    try {
        psi = parse_map(config.psi_source, config.dim);
    } catch (const ParseError& e) {
        report_parse_error(err, "--psi", config.psi_source, e);
        return kInputError;
    }

    const ValidationReport phi_check = validate_self_map(*phi, config.sample_budget, config.seed);
    const ValidationReport psi_check = validate_self_map(*psi, config.sample_budget, config.seed);
    if (!phi_check.passed || !psi_check.passed) {
        if (!phi_check.passed) err << "error: phi is not a self-map of U^" << config.dim << ": " << phi_check.failure << '\n';
        if (!psi_check.passed) err << "error: psi is not a self-map of U^" << config.dim << ": " << psi_check.failure << '\n';
        return kValidationFailed;
    }

    const SymbolPair pair(phi->with_validation(phi_check), psi->with_validation(psi_check));
    SupOptions options;
    options.budget = config.sample_budget;
    options.seed = config.seed;
    options.refine_iters = config.refine_iters;
    BoundReport report;
    try {
        report = extrapolate_and_verdict(estimate_sups(pair, *ladder, options));
    } catch (const EvalError& e) {
        err << "error: evaluation failed while sampling: " << e.what() << '\n';
        return kValidationFailed;
    }

    if (config.format == "csv") return emit(rows_csv(report), config.output_path, out, err);

    Json j = header("analyze");
    j["config"] = config_json(config);
    j["validation"] = Json{{"phi", to_json(phi_check)}, {"psi", to_json(psi_check)}};
    const Json body = to_json(report);
    for (const auto& [key, value] : body.items()) j[key] = value;
    stamp_runtime(j, config.record_runtime, start);
    return emit(dump_json(j), config.output_path, out, err);
}

int cmd_bloch(const BlochJob& job, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    Expr f = Expr::literal(0.0);
    try {
        f = parse_expression(job.f_source, job.dim);
    } catch (const ParseError& e) {
        report_parse_error(err, "--f", job.f_source, e);
        return kInputError;
    }
    BlochOptions options;
    options.budget = job.sample_budget;
    options.seed = job.seed;
    options.refine_iters = job.refine_iters;
    BlochNormEstimate est;
    try {
        est = estimate_bloch_norms(f, job.dim, options);
    } catch (const EvalError& e) {
        err << "error: evaluation failed: " << e.what() << '\n';
        return kInputError;
    }
    Json j = header("bloch");
    j["config"] = Json{{"dim", job.dim}, {"f", job.f_source}, {"samples", job.sample_budget},
                       {"refine_iters", job.refine_iters}, {"seed", job.seed}};
    const Json body = to_json(est);
    for (const auto& [key, value] : body.items()) j[key] = value;
    stamp_runtime(j, job.record_runtime, start);
    return emit(dump_json(j), job.output_path, out, err);
}

int cmd_verify(const VerifyJob& job, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    SuiteRun run;
    try {
        run = run_suite(job.suite, job.trials, job.seed);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    std::size_t violations = 0;
    Json reports = Json::array();
    for (const auto& r : run.reports) {
        violations += r.violations;
        reports.push_back(to_json(r));
    }
    Json j = header("verify");
    j["suite"] = job.suite;
    run.config["seed"] = job.seed;
    j["config"] = run.config;
    j["reports"] = std::move(reports);
    j["violations"] = violations;
    j["passed"] = violations == 0;
    stamp_runtime(j, job.record_runtime, start);
    const int io = emit(dump_json(j), job.output_path, out, err);
    if (io != kOk) return io;
    return violations == 0 ? kOk : kViolations;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Essential-norm bounds for differences of composition operators on the polydisc"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kToolName) + " " + POLYBLOCH_VERSION);

    int threads = 0;
    std::uint64_t seed = 0;
    bool record_runtime = false;
    app.add_option("--threads", threads, "Worker threads (default: machine parallelism)")->check(CLI::NonNegativeNumber);

    JobConfig analyze;
    std::string ladder_text;
    std::string job_path;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Bound ||C_phi - C_psi||_e and decide compactness");
    analyze_cmd->add_option("--job", job_path, "JSON job file; flags given explicitly override it");
    analyze_cmd->add_option("--dim", analyze.dim, "Polydisc dimension n")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--phi", analyze.phi_source, "phi as n ';'-separated expressions in z1..zn");
    analyze_cmd->add_option("--psi", analyze.psi_source, "psi as n ';'-separated expressions in z1..zn");
    analyze_cmd->add_option("--delta-ladder", ladder_text, "Decreasing deltas, e.g. 0.2,0.1,0.05,0.02,0.01,0.005");
    analyze_cmd->add_option("--samples", analyze.sample_budget, "Sample budget (>= 1000)");
    analyze_cmd->add_option("--refine-iters", analyze.refine_iters, "Pattern-search iterations per start");
    analyze_cmd->add_option("--seed", seed, "Seed (fallback: POLYBLOCH_SEED, then 0)");
    analyze_cmd->add_option("--out", analyze.output_path, "Report path (default: stdout)");
    analyze_cmd->add_option("--format", analyze.format, "json or csv");
    analyze_cmd->add_flag("--record-runtime", record_runtime, "Fill runtime_ms in the report");

    BlochJob bloch;
    CLI::App* bloch_cmd = app.add_subcommand("bloch", "Estimate the Bloch norms of a function");
    bloch_cmd->add_option("--f", bloch.f_source, "Scalar expression in z1..zn")->required();
    bloch_cmd->add_option("--dim", bloch.dim, "Polydisc dimension n")->check(CLI::PositiveNumber);
    bloch_cmd->add_option("--samples", bloch.sample_budget, "Sample budget");
    bloch_cmd->add_option("--refine-iters", bloch.refine_iters, "Pattern-search iterations per start");
    bloch_cmd->add_option("--seed", seed, "Seed (fallback: POLYBLOCH_SEED, then 0)");
    bloch_cmd->add_option("--out", bloch.output_path, "Report path (default: stdout)");
    bloch_cmd->add_flag("--record-runtime", record_runtime, "Fill runtime_ms in the report");

    VerifyJob verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run a randomized inequality suite");
    verify_cmd->add_option("--suite", verify.suite, "lemma1 | lemma2 | norms | oracle | fm")->required();
    verify_cmd->add_option("--trials", verify.trials, "Trials (suite-specific meaning; 0 = default)");
    verify_cmd->add_option("--seed", seed, "Seed (fallback: POLYBLOCH_SEED, then 0)");
    verify_cmd->add_option("--out", verify.output_path, "Report path (default: stdout)");
    verify_cmd->add_flag("--record-runtime", record_runtime, "Fill runtime_ms in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    set_worker_count(threads);

    auto seed_given = [&](CLI::App* cmd) { return cmd->count("--seed") > 0; };
    auto resolve_seed = [&](CLI::App* cmd, std::uint64_t fallback) -> std::uint64_t {
        if (seed_given(cmd)) return seed;
        if (auto s = env_seed()) return *s;
        return fallback;
    };

    try {
        if (*analyze_cmd) {
            JobConfig config = analyze;
            if (!job_path.empty()) {
                try {
                    config = load_job_file(job_path);
                } catch (const std::ios_base::failure& e) {
                    err << "error: " << e.what() << '\n';
                    return kIoError;
                }
                // explicit flags win over the job file
                if (analyze_cmd->count("--dim")) config.dim = analyze.dim;
                if (analyze_cmd->count("--phi")) config.phi_source = analyze.phi_source;
                if (analyze_cmd->count("--psi")) config.psi_source = analyze.psi_source;
                if (analyze_cmd->count("--samples")) config.sample_budget = analyze.sample_budget;
                if (analyze_cmd->count("--refine-iters")) config.refine_iters = analyze.refine_iters;
                if (analyze_cmd->count("--out")) config.output_path = analyze.output_path;
                if (analyze_cmd->count("--format")) config.format = analyze.format;
            }
            if (!ladder_text.empty()) config.delta_ladder = parse_ladder(ladder_text);
            config.seed = resolve_seed(analyze_cmd, job_path.empty() ? 0 : config.seed);
            config.record_runtime = record_runtime;
            if (config.phi_source.empty() || config.psi_source.empty()) {
                err << "error: analyze needs --phi and --psi (or a job file providing them)\n";
                return kInputError;
            }
            return cmd_analyze(config, out, err);
        }
        if (*bloch_cmd) {
            bloch.seed = resolve_seed(bloch_cmd, 0);
            bloch.record_runtime = record_runtime;
            return cmd_bloch(bloch, out, err);
        }
        verify.seed = resolve_seed(verify_cmd, 0);
        verify.record_runtime = record_runtime;
        return cmd_verify(verify, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace polybloch::cli
