#include "bodies.hpp"

namespace polybloch::kernels::reference {

BlochSamples bloch_samples(const Expr& f, const BoundaryWeightedSampler& sampler, std::size_t count) {
    BlochSamples out = detail::make_bloch_samples(count);
    std::vector<Complex> z(sampler.dim());
    for (std::size_t i = 0; i < count; ++i) detail::bloch_body(f, sampler, i, z, out);
    return out;
}

DiscrepancySamples discrepancy_samples(const SymbolMap& phi, const SymbolMap& psi,
                                       const BoundaryWeightedSampler& sampler, std::size_t count) {
    DiscrepancySamples out = detail::make_discrepancy_samples(sampler.dim(), count);
    detail::DiscrepancyScratch scratch(sampler.dim());
    for (std::size_t i = 0; i < count; ++i) detail::discrepancy_body(phi, psi, sampler, i, scratch, out);
    return out;
}

} // namespace polybloch::kernels::reference
