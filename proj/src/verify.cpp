#include "polybloch/verify.hpp"

#include "polybloch/error.hpp"
#include "polybloch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace polybloch {

namespace {

// Streams for trial_engine so that suites never share random numbers.
enum Stream : std::uint64_t {
    kLemma1 = 0x1000,
    kLemma2 = 0x2000,
    kChain = 0x3000,
    kOracle = 0x4000,
    kOracleDirections = 0x5000,
    kFm = 0x6000,
};

CuratedFunction curated(std::string source, std::size_t dim, double norm, double seminorm, std::string note) {
    CuratedFunction f{source, parse_expression(source, dim), dim, norm, seminorm, std::move(note)};
    return f;
}

std::string var(std::size_t j) { return "z" + std::to_string(j + 1); }

struct TrialOutcome {
    double lhs = 0.0;
    double rhs = 0.0;
    bool violation = false;
    bool diagnostic_violation = false;
    std::vector<std::vector<Complex>> witness;
};

void absorb(InequalityReport& report, const TrialOutcome& t, const std::string& label, double parameter = 0.0) {
    ++report.trials;
    if (t.violation) ++report.violations;
    if (t.diagnostic_violation) ++report.diagnostic_violations;
    double ratio = 0.0;
    if (t.rhs > 0.0) {
        ratio = t.lhs / t.rhs;
    } else if (t.lhs > 0.0) {
        ratio = std::numeric_limits<double>::infinity();
    }
    if (ratio > report.worst_ratio || (report.worst_witness.empty() && !t.witness.empty())) {
        report.worst_ratio = std::max(report.worst_ratio, ratio);
        report.worst_label = label;
        report.worst_witness = t.witness;
        report.worst_parameter = parameter;
    }
}

std::vector<Complex> nearby_point(std::mt19937_64& rng, std::span<const Complex> z) {
    std::vector<Complex> w(z.begin(), z.end());
    std::normal_distribution<double> normal;
    for (auto& c : w) {
        const double scale = 1e-3 * (1.0 - std::abs(c));
        const double dx = normal(rng);
        c += scale * Complex(dx, normal(rng));
        const double r = std::abs(c);
        if (r > kSampleRadiusCap) c *= kSampleRadiusCap / r;
    }
    return w;
}

} // namespace

std::vector<CuratedFunction> curated_family(std::size_t dim) {
    if (dim == 0) throw DomainError("curated_family: dimension must be at least 1");
    const std::string last = var(dim - 1);
    const double n = static_cast<double>(dim);
    std::vector<CuratedFunction> family;
    family.push_back(curated("z1", dim, 1.0, 1.0, "G = 1-|z1|^2, largest at the origin; f(0) = 0"));
    family.push_back(curated("mob(0.5, " + last + ")", dim, 1.5, 1.0,
                             "G = 1 - rho(z, a)^2 <= 1 with equality at z = a; |f(0)| = |a| = 0.5"));
    family.push_back(curated("mob(0.3+0.4i, z1)", dim, 1.5, 1.0,
                             "G = 1 - rho(z, a)^2 <= 1 with equality at z = a; |f(0)| = |a| = 0.5"));
    // mob(-0.3, .) then mob(0.5, .) is again a disc automorphism
    family.push_back(curated("mob(0.5, mob(-0.3, z1))", dim, 1.0 + 0.2 / 0.85, 1.0,
                             "composite of automorphisms: G <= 1 with equality at a point; |f(0)| = |(0.3-0.5)/(1-0.15)|"));
    family.push_back(curated("scale(0.5, log((1+" + last + ")/(1-" + last + ")))", dim, 1.0, 1.0,
                             "G = (1-|z|^2)/|1-z^2| <= 1, equal to 1 on the real diameter; f(0) = 0"));
    const double square_sup = 4.0 / (3.0 * std::sqrt(3.0));
    family.push_back(curated("pow(z1, 2)", dim, square_sup, square_sup,
                             "G = 2r(1-r^2), largest at r = 1/sqrt(3) with value 4/(3 sqrt 3)"));
    std::string sum = "z1";
    for (std::size_t j = 1; j < dim; ++j) sum += " + " + var(j);
    family.push_back(curated(sum, dim, n, std::sqrt(n),
                             "G = sum_j (1-|z_j|^2), largest (= n) at the origin; Q = sqrt(sum_j (1-|z_j|^2)^2) <= sqrt(n)"));
    if (dim >= 2) {
        family.push_back(curated("scale(0.5, z1*z2)", dim, 0.5, 0.5,
                                 "G/0.5 = (r+s)(1-rs) <= 1 (rs >= r+s-1), approached as s -> 1 with r = 0"));
    }
    family.push_back(curated("0.75", dim, 0.75, 0.0, "constant: ||f|| = |f(0)|"));
    return family;
}

CuratedFunction normalized(const CuratedFunction& f) {
    if (!(f.exact_norm > 0.0)) throw DomainError("normalized: zero function");
    CuratedFunction g = f;
    g.expr = Expr::scale(1.0 / f.exact_norm, f.expr);
    g.label = f.label + " / ||f||";
    g.exact_norm = 1.0;
    g.exact_seminorm_B = f.exact_seminorm_B / f.exact_norm;
    return g;
}

CuratedFunction extremal_fm(Complex a, std::size_t l, std::size_t dim) {
    if (!is_finite(a) || !(std::abs(a) < 1.0)) throw DomainError("extremal_fm: parameter must satisfy |a| < 1");
    if (l >= dim) throw DomainError("extremal_fm: coordinate index out of range");
    const double m = std::abs(a);
    Expr expr = Expr::scale(1.0 - m, Expr::divide(Expr::literal(1.0),
                                                   Expr::subtract(Expr::literal(1.0), Expr::scale(std::conj(a), Expr::variable(l)))));
    const double sup_g = m / (1.0 + m);
    return {"f_a(a=" + std::to_string(a.real()) + (a.imag() < 0 ? "" : "+") + std::to_string(a.imag()) + "i, l=" +
                std::to_string(l + 1) + ")",
            std::move(expr), dim, (1.0 - m) + sup_g, sup_g,
            "f(0) = 1-|a|; G = |a|(1-|a|)(1-|z_l|^2)/|1-conj(a) z_l|^2, largest at z_l = a with value |a|/(1+|a|)"};
}

Complex fm_difference(Complex a, Complex b) {
    if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) throw DomainError("fm_difference: points must lie in the disc");
    const double m = std::abs(a);
    return (1.0 - m) * (std::conj(a) * (a - b)) / ((1.0 - m * m) * (1.0 - std::conj(a) * b));
}

InequalityReport check_lemma1(const std::vector<CuratedFunction>& family, std::size_t trials, std::uint64_t seed,
                              Execution exec) {
    InequalityReport report;
    report.suite = "lemma1";
    std::vector<TrialOutcome> outcomes(family.size() * trials);
    for_each_index(exec, outcomes.size(), [&](std::size_t slot) {
        const std::size_t fi = slot / trials;
        const std::size_t t = slot % trials;
        const CuratedFunction& f = family[fi];
        auto rng = trial_engine(seed, kLemma1 + fi, t);
        const std::vector<Complex> z = random_polydisc_point(rng, f.dim);
        const double mode = uniform01(rng);
        std::vector<Complex> w;
        if (mode < 0.05) {
            w = z;
        } else if (mode < 0.3) {
            w = nearby_point(rng, z);
        } else {
            w = random_polydisc_point(rng, f.dim);
        }
        const double n = static_cast<double>(f.dim);
        const double k = kobayashi_raw(z, w);
        TrialOutcome& out = outcomes[slot];
        out.lhs = std::abs(eval_scalar(f.expr, z) - eval_scalar(f.expr, w));
        out.rhs = n * n * f.exact_norm * k;
        out.violation = out.lhs > out.rhs + kInequalitySlack;
        out.diagnostic_violation = out.lhs > n * f.exact_seminorm_B * k + kInequalitySlack;
        out.witness = {z, w};
    });
    for (std::size_t slot = 0; slot < outcomes.size(); ++slot) absorb(report, outcomes[slot], family[slot / trials].label);
    report.notes.emplace_back("diagnostic_violations counts |f(z)-f(w)| > n ||f||_B k(z,w) + 1e-10");
    return report;
}

InequalityReport check_lemma2(const std::vector<CuratedFunction>& family, double delta,
                              const std::vector<double>& r_ladder, std::size_t trials, std::uint64_t seed,
                              Execution exec) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("check_lemma2: delta must lie in (0, 1)");
    for (std::size_t k = 0; k < r_ladder.size(); ++k) {
        if (!(r_ladder[k] > 0.0 && r_ladder[k] < 1.0)) throw DomainError("check_lemma2: r must lie in (0, 1)");
        if (k > 0 && !(r_ladder[k] > r_ladder[k - 1])) throw DomainError("check_lemma2: r ladder must increase");
    }
    std::vector<CuratedFunction> unit;
    for (const auto& f : family) unit.push_back(normalized(f));

    InequalityReport report;
    report.suite = "lemma2";
    const std::size_t per_function = r_ladder.size() * trials;
    std::vector<TrialOutcome> outcomes(unit.size() * per_function);
    for_each_index(exec, outcomes.size(), [&](std::size_t slot) {
        const std::size_t fi = slot / per_function;
        const std::size_t ri = (slot % per_function) / trials;
        const std::size_t t = slot % trials;
        const CuratedFunction& f = unit[fi];
        auto rng = trial_engine(seed, kLemma2 + fi, t);
        const std::vector<Complex> z =
            t == 0 ? std::vector<Complex>(f.dim) : random_polydisc_point(rng, f.dim, delta);
        const double r = r_ladder[ri];
        std::vector<Complex> rz = z;
        for (auto& c : rz) c *= r;
        const double n = static_cast<double>(f.dim);
        TrialOutcome& out = outcomes[slot];
        out.lhs = std::abs(eval_scalar(f.expr, z) - eval_scalar(f.expr, rz));
        out.rhs = (1.0 - r) * n / (1.0 - delta * delta);
        out.violation = out.lhs > out.rhs + kInequalitySlack;
        out.witness = {z};
    });
    for (std::size_t fi = 0; fi < unit.size(); ++fi) {
        double previous_sup = std::numeric_limits<double>::infinity();
        for (std::size_t ri = 0; ri < r_ladder.size(); ++ri) {
            double sup = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                const TrialOutcome& o = outcomes[fi * per_function + ri * trials + t];
                sup = std::max(sup, o.lhs);
                absorb(report, o, unit[fi].label, r_ladder[ri]);
            }
            // a constant gives 0 at every r; equality is allowed
            if (sup > previous_sup) {
                ++report.violations;
                report.notes.push_back("sampled sup increased at r = " + std::to_string(r_ladder[ri]) + " for " +
                                       unit[fi].label);
            }
            previous_sup = sup;
        }
    }
    return report;
}

InequalityReport check_equivalence_chain(const std::vector<CuratedFunction>& family, std::size_t points,
                                         std::size_t estimate_budget, std::uint64_t seed, Execution exec) {
    InequalityReport report;
    report.suite = "norms";
    std::vector<TrialOutcome> outcomes(family.size() * points);
    for_each_index(exec, outcomes.size(), [&](std::size_t slot) {
        const std::size_t fi = slot / points;
        const std::size_t t = slot % points;
        const CuratedFunction& f = family[fi];
        auto rng = trial_engine(seed, kChain + fi, t);
        const std::vector<Complex> z = t == 0 ? std::vector<Complex>(f.dim) : random_polydisc_point(rng, f.dim);
        const Jet jet = eval_jet(f.expr, z);
        const double n = static_cast<double>(f.dim);
        const double g = bloch_g(z, jet.partials);
        const double mid = bloch_max_term(z, jet.partials);
        const double q = bloch_q(z, jet.partials);
        TrialOutcome& out = outcomes[slot];
        out.violation = !(g / n - 1e-12 <= mid && mid <= q + 1e-12 && q + 1e-12 <= n * g + 1e-11);
        // worst ratio tracks the tightest link, Q / (n G)
        out.lhs = q;
        out.rhs = n * g;
        out.witness = {z};
    });
    for (std::size_t slot = 0; slot < outcomes.size(); ++slot) absorb(report, outcomes[slot], family[slot / points].label);

    for (std::size_t fi = 0; fi < family.size(); ++fi) {
        const CuratedFunction& f = family[fi];
        BlochOptions options;
        options.budget = estimate_budget;
        options.seed = seed + fi;
        options.execution = exec;
        const BlochNormEstimate est = estimate_bloch_norms(f.expr, f.dim, options);
        const double n = static_cast<double>(f.dim);
        ++report.trials;
        if (!(est.norm_G / n <= est.norm_1 + 1e-6 && est.norm_1 <= n * est.norm_G + 1e-6)) {
            ++report.violations;
            report.notes.push_back("estimate-level norm equivalence fails for " + f.label);
        }
        // sampled suprema must stay below the hand-derived values
        if (est.norm_G > f.exact_norm + 1e-9 || est.seminorm_B > f.exact_seminorm_B + 1e-9) {
            ++report.diagnostic_violations;
            report.notes.push_back("sampled norm above the derived value for " + f.label);
        }
    }
    report.notes.emplace_back("pointwise: (1/n)G - 1e-12 <= max term <= Q + 1e-12 <= nG + 1e-11; estimate level within 1e-6");
    return report;
}

double direction_oracle(const Expr& f, const PolydiscPoint& z, std::size_t trials, std::uint64_t seed) {
    const Jet jet = eval_jet(f, z);
    const std::size_t n = z.dim();
    auto rng = trial_engine(seed, kOracleDirections, 0);
    const auto quotient = [&](std::span<const Complex> u) { return directional_quotient(z.coords(), jet.partials, u); };

    // draw in v with u_j = (1-|z_j|^2) v_j, where the quotient is isotropic
    std::vector<double> weight(n);
    for (std::size_t j = 0; j < n; ++j) weight[j] = disc_weight(z.coords()[j]);
    const auto to_u = [&](const std::vector<Complex>& v) {
        std::vector<Complex> u(n);
        for (std::size_t j = 0; j < n; ++j) u[j] = weight[j] * v[j];
        return u;
    };
    const auto length = [](const std::vector<Complex>& v) {
        double s = 0.0;
        for (const Complex& c : v) s += std::norm(c);
        return std::sqrt(s);
    };

    const std::size_t random_phase = std::max<std::size_t>(1, trials / 2);
    double best = 0.0;
    std::vector<Complex> best_v;
    for (std::size_t t = 0; t < std::min(random_phase, trials); ++t) {
        std::vector<Complex> v = random_gaussian_vector(rng, n);
        if (sup_norm(v) == 0.0) continue;
        const double value = quotient(to_u(v));
        if (best_v.empty() || value > best) {
            best = value;
            best_v = std::move(v);
        }
    }
    if (best_v.empty()) return best;

    double spread = 0.5;
    std::size_t misses = 0;
    for (std::size_t t = random_phase; t < trials; ++t) {
        const double scale = spread * length(best_v);
        std::vector<Complex> v = random_gaussian_vector(rng, n);
        for (std::size_t j = 0; j < n; ++j) v[j] = best_v[j] + scale * v[j];
        if (sup_norm(v) == 0.0) continue;
        const double value = quotient(to_u(v));
        if (value > best) {
            best = value;
            best_v = std::move(v);
            misses = 0;
        } else if (++misses >= 8 * n) {
            spread = std::max(spread * 0.5, 1e-9);
            misses = 0;
        }
    }
    return best;
}

InequalityReport check_direction_oracle(const std::vector<CuratedFunction>& family, std::size_t points_per_function,
                                        std::size_t directions, std::uint64_t seed, Execution exec) {
    InequalityReport report;
    report.suite = "oracle";
    std::vector<TrialOutcome> outcomes(family.size() * points_per_function);
    for_each_index(exec, outcomes.size(), [&](std::size_t slot) {
        const std::size_t fi = slot / points_per_function;
        const std::size_t t = slot % points_per_function;
        const CuratedFunction& f = family[fi];
        auto rng = trial_engine(seed, kOracle + fi, t);
        const PolydiscPoint z(random_polydisc_point(rng, f.dim, 0.999));
        const Jet jet = eval_jet(f.expr, z);
        const double closed = bloch_q(z.coords(), jet.partials);
        const double sampled = direction_oracle(f.expr, z, directions, seed ^ (fi << 32U) ^ t);
        TrialOutcome& out = outcomes[slot];
        out.lhs = sampled;
        out.rhs = closed;
        bool ok = sampled <= closed + 1e-12 && closed - sampled <= 1e-4 * closed;
        if (closed > 0.0) {
            const double at_maximizer =
                directional_quotient(z.coords(), jet.partials, maximizing_direction(z.coords(), jet.partials));
            ok = ok && std::abs(at_maximizer - closed) <= 1e-12 * std::max(1.0, closed);
        }
        out.violation = !ok;
        out.witness = {std::vector<Complex>(z.coords().begin(), z.coords().end())};
    });
    for (std::size_t slot = 0; slot < outcomes.size(); ++slot) {
        absorb(report, outcomes[slot], family[slot / points_per_function].label);
    }
    report.notes.emplace_back("worst_ratio is oracle / closed form; must not exceed 1");
    return report;
}

InequalityReport check_extremal_family(const std::vector<double>& moduli, std::size_t dim, std::size_t budget,
                                       std::uint64_t seed, Execution exec) {
    InequalityReport report;
    report.suite = "fm";
    const double phase = 0.3;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
        const Complex a = std::polar(moduli[k], phase);
        const std::size_t l = k % dim;
        const CuratedFunction f = extremal_fm(a, l, dim);

        BlochOptions options;
        options.budget = budget;
        options.seed = seed + k;
        options.execution = exec;
        const BlochNormEstimate est = estimate_bloch_norms(f.expr, dim, options);
        TrialOutcome norm_check;
        norm_check.lhs = est.norm_G;
        norm_check.rhs = 2.0;
        norm_check.violation = est.norm_G > 2.0 + 1e-6;
        norm_check.diagnostic_violation = est.norm_G > f.exact_norm + 1e-9;
        norm_check.witness = {est.argmax_point_G};
        absorb(report, norm_check, f.label + " norm");

        // uniform smallness on |||z||| <= 1/2
        const double bound = 2.0 * (1.0 - moduli[k]);
        const std::size_t points = std::max<std::size_t>(budget / 4, 1);
        std::vector<double> values(points);
        for_each_index(exec, points, [&](std::size_t t) {
            auto rng = trial_engine(seed, kFm + k, t);
            const std::vector<Complex> z = t == 0 ? std::vector<Complex>(dim) : random_polydisc_point(rng, dim, 0.5);
            values[t] = std::abs(eval_scalar(f.expr, z));
        });
        TrialOutcome sup_check;
        sup_check.lhs = *std::max_element(values.begin(), values.end());
        sup_check.rhs = bound;
        sup_check.violation = sup_check.lhs > bound + kInequalitySlack;
        absorb(report, sup_check, f.label + " sup on |||z|||<=1/2");
    }
    report.notes.emplace_back("diagnostic_violations counts sampled norms above the exact norm (1-|a|) + |a|/(1+|a|)");
    return report;
}

} // namespace polybloch
