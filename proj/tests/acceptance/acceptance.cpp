// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "polybloch/bloch.hpp"
#include "polybloch/cli.hpp"
#include "polybloch/essential.hpp"
#include "polybloch/parallel.hpp"
#include "polybloch/sampling.hpp"
#include "polybloch/symbols.hpp"
#include "polybloch/verify.hpp"

#include "support/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace polybloch;

namespace {

struct Result {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Result()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = budget_seconds <= 0.0 || seconds <= budget_seconds;
    const bool pass = r.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s; %.2f s", pass ? "PASS" : "FAIL", id, title, r.detail.c_str(), seconds);
    if (budget_seconds > 0.0) std::printf(" (limit %.0f s%s)", budget_seconds, in_time ? "" : ", exceeded");
    std::printf("\n");
    std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Result suite_over_dims(const std::function<InequalityReport(std::size_t)>& run) {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst = 0.0;
    std::string label;
    for (std::size_t n = 1; n <= 3; ++n) {
        const InequalityReport r = run(n);
        trials += r.trials;
        violations += r.violations;
        if (r.worst_ratio > worst) {
            worst = r.worst_ratio;
            label = r.worst_label + " (n=" + std::to_string(n) + ")";
        }
    }
    return {violations == 0, fmt("%zu checks, %zu violations, worst ratio %.6g at %s", trials, violations, worst,
                                 label.c_str())};
}

SymbolMap validated(const std::string& src, std::size_t n, std::size_t budget) {
    const SymbolMap m = parse_map(src, n);
    const ValidationReport v = validate_self_map(m, budget, 0);
    if (!v.passed) throw std::runtime_error("map '" + src + "' failed validation: " + v.failure);
    return m.with_validation(v);
}

struct PairRun {
    std::string phi;
    std::string psi;
    BoundReport report;
    SupEstimate swapped;
};

std::vector<PairRun> analyze_runs;

BoundReport analyze(const std::string& phi, const std::string& psi, std::size_t budget) {
    const SymbolPair pair(validated(phi, 2, budget), validated(psi, 2, budget));
    SupOptions options;
    options.budget = budget;
    PairRun run{phi, psi, extrapolate_and_verdict(estimate_sups(pair, DeltaLadder::standard(), options)), {}};
    run.swapped = estimate_sups(pair.swapped(), DeltaLadder::standard(), options);
    analyze_runs.push_back(run);
    return run.report;
}

} // namespace

int main() {
    criterion(1, "closed-form Q_f vs direction oracle", 30.0, [] {
        std::size_t pairs = 0;
        std::size_t violations = 0;
        for (std::size_t n = 1; n <= 3; ++n) {
            const InequalityReport r = check_direction_oracle(curated_family(n), 4, 100000, 1);
            pairs += r.trials;
            violations += r.violations;
        }
        return Result{violations == 0 && pairs >= 100,
                      fmt("%zu (f, z) pairs x 1e5 directions, %zu violations of oracle <= Q_f, gap <= 1e-4, "
                          "maximizer equality 1e-12",
                          pairs, violations)};
    });

    criterion(2, "jet vs central finite differences", 10.0, [] {
        std::size_t pairs = 0;
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n) {
            testkit::ExpressionGenerator gen(n, 7000 + n);
            const std::size_t count = n == 3 ? 334 : 333;
            for (std::size_t t = 0; t < count; ++t, ++pairs) {
                const Expr e = gen.next(3);
                const auto z = gen.point(0.95);
                const Jet jet = eval_jet(e, z);
                const auto fd = testkit::central_differences(e, z);
                double scale = 1.0;
                for (const Complex& d : jet.partials) scale = std::max(scale, std::abs(d));
                for (std::size_t j = 0; j < n; ++j) {
                    worst = std::max(worst, std::abs(fd.along_real[j] - jet.partials[j]) / scale);
                    worst = std::max(worst, std::abs(fd.along_imag[j] - jet.partials[j]) / scale);
                }
            }
        }
        return Result{worst <= 1e-6, fmt("%zu (expression, point) pairs, worst relative error %.3g", pairs, worst)};
    });

    criterion(3, "Lipschitz suite |f(z)-f(w)| <= n^2 ||f|| k(z,w)", 20.0,
              [] { return suite_over_dims([](std::size_t n) { return check_lemma1(curated_family(n), 10000, 1); }); });

    criterion(4, "radial dilation suite (1-r)n/(1-delta^2), delta = 0.5", 10.0, [] {
        return suite_over_dims(
            [](std::size_t n) { return check_lemma2(curated_family(n), 0.5, kDefaultRLadder, 2000, 1); });
    });

    criterion(5, "equivalence chain (1/n)G <= max term <= Q <= nG", 10.0, [] {
        return suite_over_dims(
            [](std::size_t n) { return check_equivalence_chain(curated_family(n), 10000, 5000, 1); });
    });

    criterion(6, "extremal family norm <= 2 and uniform smallness", 10.0, [] {
        const InequalityReport r = check_extremal_family(kDefaultFmModuli, 2, 20000, 1);
        return Result{r.violations == 0, fmt("|a| in {0, 0.5, 0.9, 0.99, 0.999}: %zu checks, %zu violations",
                                             r.trials, r.violations)};
    });

    criterion(7, "verdicts on curated pairs (n = 2, budget 2e5)", 120.0, [] {
        const std::size_t budget = 200000;
        const BoundReport same = analyze("z1; z2", "z1; z2", budget);
        const BoundReport shrink = analyze("0.5*z1; 0.5*z2", "z1/3; z2/3", budget);
        const BoundReport square = analyze("z1; z2", "pow(z1,2); z2", budget);
        const bool ok_same = same.verdict == Verdict::compact && same.lower_bound == 0.0 && same.upper_bound == 0.0;
        const bool ok_shrink = shrink.verdict == Verdict::compact && shrink.diagnostics.degenerate_empty;
        const bool ok_square = square.verdict == Verdict::not_compact && square.lower_bound >= 0.24 &&
                               square.S_limit >= 0.98;
        return Result{ok_same && ok_shrink && ok_square,
                      fmt("identical: %s [%g, %g]; contractions: %s (degenerate=%d); z1 vs z1^2: %s lower %.6g "
                          "S_limit %.6g",
                          to_string(same.verdict), same.lower_bound, same.upper_bound, to_string(shrink.verdict),
                          shrink.diagnostics.degenerate_empty ? 1 : 0, to_string(square.verdict), square.lower_bound,
                          square.S_limit)};
    });

    criterion(8, "structural report invariants", 0.0, [] {
        analyze("mob(0.4, z1); z1*z2", "pow(z2, 2); scale(0.8i, z1)", 50000);
        analyze("0.9*z1; z2", "z1; 0.9*z2", 50000);
        std::size_t rows = 0;
        std::string broken;
        for (const PairRun& run : analyze_runs) {
            const auto& r = run.report;
            for (std::size_t i = 0; i < r.rows.size(); ++i, ++rows) {
                const DeltaRow& row = r.rows[i];
                const double max_b = row.b_l.empty() ? 0.0 : *std::max_element(row.b_l.begin(), row.b_l.end());
                if (i > 0 && (row.S > r.rows[i - 1].S || row.K > r.rows[i - 1].K)) broken += " monotone";
                if (row.S != max_b) broken += " S=max b_l";
                if (std::abs(row.S - run.swapped.rows[i].S) > 1e-12 || std::abs(row.K - run.swapped.rows[i].K) > 1e-12)
                    broken += " swap";
            }
            if (!(r.lower_bound <= r.upper_bound)) broken += " ordering";
            if (!broken.empty()) {
                broken = run.phi + " vs " + run.psi + ":" + broken;
                break;
            }
        }
        return Result{broken.empty(), broken.empty() ? fmt("%zu analyze runs, %zu rows checked", analyze_runs.size(), rows)
                                                     : broken};
    });

    criterion(9, "byte-identical reports across thread counts", 0.0, [] {
        auto report = [](const char* threads) {
            std::vector<std::string> args{"polybloch", "analyze",  "--phi",     "mob(0.3,z1); z1*z2",
                                          "--psi",     "pow(z2,2); 0.9*z1", "--samples", "50000",
                                          "--seed",    "5",        "--threads", threads};
            std::vector<char*> argv;
            for (auto& a : args) argv.push_back(a.data());
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return std::make_pair(code, out.str());
        };
        const auto a = report("1");
        const auto b = report("1");
        const auto c = report("4");
        const auto d = report("7");
        set_worker_count(1);
        const bool ok = a.first == 0 && !a.second.empty() && a.second == b.second && a.second == c.second &&
                        a.second == d.second;
        return Result{ok, fmt("4 runs at 1, 1, 4, 7 threads: %s (%zu bytes)", ok ? "identical" : "differ",
                              a.second.size())};
    });

    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
