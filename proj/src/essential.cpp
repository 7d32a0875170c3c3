#include "polybloch/essential.hpp"

#include "polybloch/error.hpp"
#include "polybloch/kernels.hpp"
#include "polybloch/pattern_search.hpp"
#include "polybloch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace polybloch {

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

// One evaluated point: sampled or the end point of a refinement.
struct PoolPoint {
    std::vector<Complex> z;
    double boundary;
    double s;
    double k;
    std::vector<double> rho;
};

PoolPoint evaluate_point(const SymbolPair& pair, std::vector<Complex> z) {
    const std::size_t n = pair.dim();
    std::vector<Complex> phi_image(n);
    std::vector<Complex> psi_image(n);
    std::vector<double> rho(n);
    const PointDiscrepancy d = discrepancy_at(pair.phi(), pair.psi(), z, phi_image, psi_image, rho);
    return {std::move(z), d.boundary, d.s, d.k, std::move(rho)};
}

} // namespace

SymbolPair::SymbolPair(SymbolMap phi, SymbolMap psi) : phi_(std::move(phi)), psi_(std::move(psi)) {
    if (phi_.dim() != psi_.dim()) throw DomainError("SymbolPair: phi and psi have different dimensions");
    if (!phi_.validated() || !psi_.validated()) throw DomainError("SymbolPair: both maps must pass self-map validation");
}

DeltaLadder::DeltaLadder(std::vector<double> deltas) : deltas_(std::move(deltas)) {
    if (deltas_.empty()) throw DomainError("DeltaLadder: at least one delta required");
    for (std::size_t k = 0; k < deltas_.size(); ++k) {
        require_delta(deltas_[k]);
        if (k > 0 && !(deltas_[k] < deltas_[k - 1])) throw DomainError("DeltaLadder: deltas must be strictly decreasing");
    }
}

DeltaLadder DeltaLadder::standard() { return DeltaLadder({0.2, 0.1, 0.05, 0.02, 0.01, 0.005}); }

bool in_E_delta(const SymbolPair& pair, const PolydiscPoint& z, double delta) {
    require_delta(delta);
    const double phi_sup = sup_norm(eval_map_raw(pair.phi(), z.coords()));
    const double psi_sup = sup_norm(eval_map_raw(pair.psi(), z.coords()));
    return std::max(phi_sup, psi_sup) > 1.0 - delta;
}

bool in_E_delta_l(const SymbolPair& pair, const PolydiscPoint& z, double delta, std::size_t l) {
    require_delta(delta);
    if (l >= pair.dim()) throw DomainError("in_E_delta_l: coordinate index out of range");
    const double phi_l = std::abs(eval_scalar(pair.phi().component(l), z));
    const double psi_l = std::abs(eval_scalar(pair.psi().component(l), z));
    return std::max(phi_l, psi_l) > 1.0 - delta;
}

PointDiscrepancy discrepancy_at(const SymbolMap& phi, const SymbolMap& psi, std::span<const Complex> z,
                                std::span<Complex> phi_image, std::span<Complex> psi_image, std::span<double> rho_out) {
    const std::size_t n = phi.dim();
    eval_map_into(phi, z, phi_image);
    eval_map_into(psi, z, psi_image);
    PointDiscrepancy d;
    std::size_t worst = 0;
    for (std::size_t l = 0; l < n; ++l) {
        const double a = std::abs(phi_image[l]);
        const double b = std::abs(psi_image[l]);
        if (a >= 1.0 - kInteriorMargin || b >= 1.0 - kInteriorMargin) {
            throw EscapeError("map image leaves the polydisc in coordinate " + std::to_string(l + 1));
        }
        d.phi_sup = std::max(d.phi_sup, a);
        d.psi_sup = std::max(d.psi_sup, b);
        rho_out[l] = rho(phi_image[l], psi_image[l]);
        if (rho_out[l] > d.s) {
            d.s = rho_out[l];
            worst = l;
        }
    }
    d.boundary = std::max(d.phi_sup, d.psi_sup);
    d.k = hyperbolic_length(d.s, d.s > 0.0 ? rho_complement(phi_image[worst], psi_image[worst]) : 1.0);
    return d;
}

Discrepancy discrepancy(const SymbolPair& pair, const PolydiscPoint& z) {
    const PoolPoint p = evaluate_point(pair, std::vector<Complex>(z.coords().begin(), z.coords().end()));
    return {p.s, p.k, p.rho};
}

SupEstimate estimate_sups(const SymbolPair& pair, const DeltaLadder& ladder, const SupOptions& options) {
    if (options.budget < 1000) throw DomainError("estimate_sups: budget must be at least 1000");
    const std::size_t n = pair.dim();
    const BoundaryWeightedSampler sampler(n, options.seed);
    const std::size_t count = options.budget + 1;
    const kernels::DiscrepancySamples samples =
        options.execution == Execution::parallel
            ? kernels::discrepancy_samples(pair.phi(), pair.psi(), sampler, count)
            : kernels::reference::discrepancy_samples(pair.phi(), pair.psi(), sampler, count);

    SupEstimate est;
    est.dim = n;
    est.samples = count;
    est.ladder_largest = ladder.largest();
    est.phi_sup_sampled = *std::max_element(samples.phi_sup.begin(), samples.phi_sup.end());
    est.psi_sup_sampled = *std::max_element(samples.psi_sup.begin(), samples.psi_sup.end());

    // Refinement starts: per row, the best sampled members by S.
    struct Task {
        std::size_t row;
        std::size_t sample;
    };
    std::vector<Task> tasks;
    std::vector<std::size_t> members_per_row(ladder.size());
    for (std::size_t r = 0; r < ladder.size(); ++r) {
        const double threshold = 1.0 - ladder.deltas()[r];
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < count; ++i) {
            if (samples.boundary[i] > threshold) members.push_back(i);
        }
        members_per_row[r] = members.size();
        const std::size_t take = std::min(options.refine_starts, members.size());
        std::partial_sort(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take), members.end(),
                          [&](std::size_t a, std::size_t b) {
                              return samples.s[a] > samples.s[b] || (samples.s[a] == samples.s[b] && a < b);
                          });
        for (std::size_t t = 0; t < take; ++t) tasks.push_back({r, members[t]});
    }

    std::vector<PoolPoint> refined(tasks.size());
    for_each_index(options.execution, tasks.size(), [&](std::size_t t) {
        const double threshold = 1.0 - ladder.deltas()[tasks[t].row];
        const auto objective = [&](const std::vector<Complex>& z) {
            const PoolPoint p = evaluate_point(pair, z);
            return p.boundary > threshold ? p.s : -std::numeric_limits<double>::infinity();
        };
        const PatternSearchResult result = pattern_search(
            sampler.coords(tasks[t].sample), samples.s[tasks[t].sample], objective,
            [](const std::vector<Complex>&) { return true; }, options.refine_iters, options.initial_step);
        refined[t] = evaluate_point(pair, result.point);
    });

    est.rows.resize(ladder.size());
    for (std::size_t r = 0; r < ladder.size(); ++r) {
        DeltaRow& row = est.rows[r];
        row.delta = ladder.deltas()[r];
        row.b_l.assign(n, 0.0);
        row.samples_in_region = members_per_row[r];
        const double threshold = 1.0 - row.delta;
        auto consider = [&](double boundary, double s, double k, std::span<const double> rho, auto&& coords) {
            if (!(boundary > threshold)) return;
            for (std::size_t l = 0; l < n; ++l) row.b_l[l] = std::max(row.b_l[l], rho[l]);
            if (row.witness_S.empty() || s > row.S) {
                row.S = s;
                row.witness_S = coords();
            }
            if (row.witness_K.empty() || k > row.K) {
                row.K = k;
                row.witness_K = coords();
            }
        };
        for (std::size_t i = 0; i < count; ++i) {
            consider(samples.boundary[i], samples.s[i], samples.k[i],
                     std::span<const double>(samples.coord_rho.data() + i * n, n), [&] { return sampler.coords(i); });
        }
        for (const PoolPoint& p : refined) {
            if (p.boundary > threshold) ++row.refined_in_region;
            consider(p.boundary, p.s, p.k, p.rho, [&] { return p.z; });
        }
    }
    return est;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::compact: return "Compact";
    case Verdict::not_compact: return "NotCompact";
    case Verdict::indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

BoundReport extrapolate_and_verdict(const SupEstimate& estimate, const VerdictTolerances& tol) {
    if (estimate.rows.empty()) throw DomainError("extrapolate_and_verdict: no rows");
    BoundReport report;
    report.dim = estimate.dim;
    report.rows = estimate.rows;
    BoundDiagnostics& diag = report.diagnostics;
    diag.phi_sup_sampled = estimate.phi_sup_sampled;
    diag.psi_sup_sampled = estimate.psi_sup_sampled;
    for (const DeltaRow& row : estimate.rows) {
        diag.s_trend.push_back(row.S);
        if (row.samples_in_region == 0) ++diag.empty_rows;
    }
    const bool all_empty = diag.empty_rows == estimate.rows.size();
    diag.degenerate_empty = all_empty && estimate.phi_sup_sampled < 1.0 - estimate.ladder_largest &&
                            estimate.psi_sup_sampled < 1.0 - estimate.ladder_largest;

    const DeltaRow& last = estimate.rows.back();
    report.S_limit = last.S;
    report.K_limit = last.K;
    const double n = static_cast<double>(estimate.dim);
    report.lower_bound = 0.25 * report.S_limit;
    report.upper_bound = 2.0 * n * n * report.K_limit;

    if (estimate.rows.size() >= 2) {
        diag.last_step = last.S - estimate.rows[estimate.rows.size() - 2].S;
        diag.stable = std::abs(diag.last_step) <= tol.eps_stable;
    } else {
        diag.stable = all_empty;
        if (!all_empty) diag.notes.emplace_back("a single-delta ladder cannot show a stable trend");
    }

    if (all_empty) {
        report.verdict = Verdict::compact;
        diag.notes.emplace_back(diag.degenerate_empty
                                    ? "degenerate: every E_delta region is empty; both symbols stay inside 1 - max(delta)"
                                    : "every E_delta region is empty on the sample");
    } else if (report.S_limit <= tol.eps_zero && diag.stable) {
        report.verdict = Verdict::compact;
    } else if (report.S_limit >= 10.0 * tol.eps_zero && diag.stable) {
        report.verdict = Verdict::not_compact;
    } else {
        report.verdict = Verdict::indeterminate;
        diag.notes.emplace_back(diag.stable ? "S limit between eps_zero and 10 eps_zero"
                                            : "S(delta) has not stabilized along the ladder");
    }
    if (diag.empty_rows > 0 && !all_empty) {
        diag.notes.emplace_back("some E_delta regions are empty on the sample; their sup is taken as 0");
    }
    if (report.lower_bound > report.upper_bound + 1e-12) {
        throw std::logic_error("lower bound exceeds upper bound");
    }
    return report;
}

} // namespace polybloch
