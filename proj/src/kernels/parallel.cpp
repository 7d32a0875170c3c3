#include "bodies.hpp"

#include <exception>
#include <limits>

#include <omp.h>

namespace polybloch::kernels {

namespace {

// Keeps the exception thrown at the lowest sample index so that a failing run
// reports the same point whatever the schedule.
class FirstError {
public:
    void record(std::size_t index) {
#pragma omp critical(polybloch_first_error)
        {
            if (index < index_) {
                index_ = index;
                error_ = std::current_exception();
            }
        }
    }

    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::size_t index_ = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error_;
};

} // namespace

BlochSamples bloch_samples(const Expr& f, const BoundaryWeightedSampler& sampler, std::size_t count) {
    BlochSamples out = detail::make_bloch_samples(count);
    FirstError failure;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel
    {
        std::vector<Complex> z(sampler.dim());
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                detail::bloch_body(f, sampler, static_cast<std::size_t>(i), z, out);
            } catch (...) {
                failure.record(static_cast<std::size_t>(i));
            }
        }
    }
    failure.rethrow();
    return out;
}

DiscrepancySamples discrepancy_samples(const SymbolMap& phi, const SymbolMap& psi,
                                       const BoundaryWeightedSampler& sampler, std::size_t count) {
    DiscrepancySamples out = detail::make_discrepancy_samples(sampler.dim(), count);
    FirstError failure;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel
    {
        detail::DiscrepancyScratch scratch(sampler.dim());
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                detail::discrepancy_body(phi, psi, sampler, static_cast<std::size_t>(i), scratch, out);
            } catch (...) {
                failure.record(static_cast<std::size_t>(i));
            }
        }
    }
    failure.rethrow();
    return out;
}

} // namespace polybloch::kernels
