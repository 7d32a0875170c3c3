#pragma once

// Data-parallel sample evaluation. Each kernel comes in an OpenMP version and
// a serial reference version; for the same inputs the two fill bit-identical
// arrays, whatever the thread count.

#include "polybloch/sampling.hpp"
#include "polybloch/symbols.hpp"

#include <cstddef>
#include <vector>

namespace polybloch::kernels {

// Per-sample values of a scalar function over sampler indices [0, count).
struct BlochSamples {
    std::vector<double> q;
    std::vector<double> g;
};

// Per-sample values for a pair of maps over sampler indices [0, count).
struct DiscrepancySamples {
    std::size_t dim = 0;
    std::vector<double> boundary;   // max(|||phi(z)|||, |||psi(z)|||)
    std::vector<double> phi_sup;
    std::vector<double> psi_sup;
    std::vector<double> s;          // |||phi_{phi(z)}(psi(z))|||
    std::vector<double> k;          // k_{U^n}(phi(z), psi(z))
    std::vector<double> coord_rho;  // row-major, count x dim

    std::size_t count() const noexcept { return s.size(); }
    double rho(std::size_t i, std::size_t l) const { return coord_rho[i * dim + l]; }
};

BlochSamples bloch_samples(const Expr& f, const BoundaryWeightedSampler& sampler, std::size_t count);
DiscrepancySamples discrepancy_samples(const SymbolMap& phi, const SymbolMap& psi,
                                       const BoundaryWeightedSampler& sampler, std::size_t count);

namespace reference {

BlochSamples bloch_samples(const Expr& f, const BoundaryWeightedSampler& sampler, std::size_t count);
DiscrepancySamples discrepancy_samples(const SymbolMap& phi, const SymbolMap& psi,
                                       const BoundaryWeightedSampler& sampler, std::size_t count);

} // namespace reference

} // namespace polybloch::kernels
