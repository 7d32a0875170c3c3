#pragma once

// Per-sample bodies shared by the OpenMP kernels and their serial references,
// so both paths execute the same floating-point operations.

#include "polybloch/bloch.hpp"
#include "polybloch/essential.hpp"
#include "polybloch/kernels.hpp"

#include <span>
#include <vector>

namespace polybloch::kernels::detail {

inline BlochSamples make_bloch_samples(std::size_t count) { return {std::vector<double>(count), std::vector<double>(count)}; }

inline void bloch_body(const Expr& f, const BoundaryWeightedSampler& sampler, std::size_t i, std::span<Complex> z,
                       BlochSamples& out) {
    sampler.fill(i, z);
    const Jet jet = eval_jet(f, z);
    out.q[i] = bloch_q(z, jet.partials);
    out.g[i] = bloch_g(z, jet.partials);
}

inline DiscrepancySamples make_discrepancy_samples(std::size_t dim, std::size_t count) {
    DiscrepancySamples out;
    out.dim = dim;
    out.boundary.resize(count);
    out.phi_sup.resize(count);
    out.psi_sup.resize(count);
    out.s.resize(count);
    out.k.resize(count);
    out.coord_rho.resize(count * dim);
    return out;
}

struct DiscrepancyScratch {
    explicit DiscrepancyScratch(std::size_t dim) : z(dim), phi_image(dim), psi_image(dim) {}
    std::vector<Complex> z;
    std::vector<Complex> phi_image;
    std::vector<Complex> psi_image;
};

inline void discrepancy_body(const SymbolMap& phi, const SymbolMap& psi, const BoundaryWeightedSampler& sampler,
                             std::size_t i, DiscrepancyScratch& scratch, DiscrepancySamples& out) {
    sampler.fill(i, scratch.z);
    const std::span<double> rho(out.coord_rho.data() + i * out.dim, out.dim);
    const PointDiscrepancy d = discrepancy_at(phi, psi, scratch.z, scratch.phi_image, scratch.psi_image, rho);
    out.boundary[i] = d.boundary;
    out.phi_sup[i] = d.phi_sup;
    out.psi_sup[i] = d.psi_sup;
    out.s[i] = d.s;
    out.k[i] = d.k;
}

} // namespace polybloch::kernels::detail
