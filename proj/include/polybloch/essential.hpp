#pragma once

// Two-sided essential-norm estimate for C_phi - C_psi : B -> H^inf on U^n.
//
// With E_delta = { z : max(|||phi(z)|||, |||psi(z)|||) > 1 - delta },
//
//   (1/4)  lim_{delta->0} sup_{E_delta} |||phi_{phi(z)}(psi(z))|||
//     <= ||C_phi - C_psi||_e <=
//   2 n^2  lim_{delta->0} sup_{E_delta} k_{U^n}(phi(z), psi(z)),
//
// and the difference is compact iff the left-hand limit is 0. The limit in
// delta is read off a finite decreasing ladder; suprema are sampled.

#include "polybloch/geometry.hpp"
#include "polybloch/parallel.hpp"
#include "polybloch/symbols.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polybloch {

// phi and psi, both validated self-maps of the same U^n. Boundedness of
// C_phi - C_psi : B -> H^inf is assumed, never checked.
class SymbolPair {
public:
    SymbolPair(SymbolMap phi, SymbolMap psi);

    const SymbolMap& phi() const noexcept { return phi_; }
    const SymbolMap& psi() const noexcept { return psi_; }
    std::size_t dim() const noexcept { return phi_.dim(); }
    bool boundedness_assumed() const noexcept { return true; }

    SymbolPair swapped() const { return SymbolPair(psi_, phi_); }

private:
    SymbolMap phi_;
    SymbolMap psi_;
};

// Strictly decreasing deltas in (0, 1).
class DeltaLadder {
public:
    explicit DeltaLadder(std::vector<double> deltas);
    static DeltaLadder standard();

    const std::vector<double>& deltas() const noexcept { return deltas_; }
    std::size_t size() const noexcept { return deltas_.size(); }
    double largest() const { return deltas_.front(); }

private:
    std::vector<double> deltas_;
};

// z in E_delta: max(|||phi(z)|||, |||psi(z)|||) > 1 - delta.
bool in_E_delta(const SymbolPair& pair, const PolydiscPoint& z, double delta);
// z in E_delta^l: max(|phi_l(z)|, |psi_l(z)|) > 1 - delta, l 0-based.
bool in_E_delta_l(const SymbolPair& pair, const PolydiscPoint& z, double delta, std::size_t l);

struct Discrepancy {
    double s = 0.0;                // |||phi_{phi(z)}(psi(z))||| = max_l per_coord[l]
    double k = 0.0;                // k_{U^n}(phi(z), psi(z)) = artanh(s)
    std::vector<double> per_coord; // rho(phi_l(z), psi_l(z))
};

Discrepancy discrepancy(const SymbolPair& pair, const PolydiscPoint& z);

// Allocation-free form used by the sampling kernels. `phi_image`, `psi_image`
// and `rho` are scratch/output spans of length n. Throws EscapeError if an
// image coordinate reaches modulus 1 - kInteriorMargin.
struct PointDiscrepancy {
    double boundary = 0.0; // max(|||phi(z)|||, |||psi(z)|||)
    double phi_sup = 0.0;
    double psi_sup = 0.0;
    double s = 0.0;
    double k = 0.0;
};

PointDiscrepancy discrepancy_at(const SymbolMap& phi, const SymbolMap& psi, std::span<const Complex> z,
                                std::span<Complex> phi_image, std::span<Complex> psi_image, std::span<double> rho);

struct DeltaRow {
    double delta = 0.0;
    double S = 0.0;                 // sup over E_delta of the pseudo-hyperbolic discrepancy
    double K = 0.0;                 // sup over E_delta of the Kobayashi discrepancy
    std::vector<double> b_l;        // per-coordinate sups over E_delta
    std::size_t samples_in_region = 0;
    std::size_t refined_in_region = 0;
    std::vector<Complex> witness_S; // empty when the region is empty
    std::vector<Complex> witness_K;
};

struct SupOptions {
    std::size_t budget = 200000;
    std::uint64_t seed = 0;
    unsigned refine_iters = 40;
    std::size_t refine_starts = 8;
    double initial_step = 0.05;
    Execution execution = Execution::parallel;
};

struct SupEstimate {
    std::size_t dim = 0;
    std::vector<DeltaRow> rows;
    double phi_sup_sampled = 0.0;  // max |||phi(z)||| over the sample
    double psi_sup_sampled = 0.0;
    std::size_t samples = 0;       // sampled points, origin included
    double ladder_largest = 0.0;
};

// Samples the origin plus `budget` nested boundary-weighted points, takes per
// row running maxima over E_delta members and refines the top witnesses of
// every row by pattern search constrained to that row's region. Refined
// points join every row whose region contains them, so S and K are exactly
// non-increasing along the ladder. An empty region gives S = K = 0.
SupEstimate estimate_sups(const SymbolPair& pair, const DeltaLadder& ladder, const SupOptions& options = {});

enum class Verdict { compact, not_compact, indeterminate };

const char* to_string(Verdict v);

struct VerdictTolerances {
    double eps_zero = 1e-3;
    double eps_stable = 1e-3;
};

struct BoundDiagnostics {
    bool degenerate_empty = false; // every region empty, both maps stay below 1 - max delta
    std::size_t empty_rows = 0;
    double phi_sup_sampled = 0.0;
    double psi_sup_sampled = 0.0;
    double last_step = 0.0;        // S(last row) - S(previous row)
    bool stable = false;
    std::vector<double> s_trend;
    std::vector<std::string> notes;
};

struct BoundReport {
    std::size_t dim = 0;
    std::vector<DeltaRow> rows;
    double S_limit = 0.0;
    double K_limit = 0.0;
    double lower_bound = 0.0; // S_limit / 4
    double upper_bound = 0.0; // 2 n^2 K_limit
    Verdict verdict = Verdict::indeterminate;
    bool boundedness_assumed = true;
    BoundDiagnostics diagnostics;
};

BoundReport extrapolate_and_verdict(const SupEstimate& estimate, const VerdictTolerances& tolerances = {});

} // namespace polybloch
