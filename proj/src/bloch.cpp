#include "polybloch/bloch.hpp"

#include "polybloch/error.hpp"
#include "polybloch/kernels.hpp"
#include "polybloch/pattern_search.hpp"
#include "polybloch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polybloch {

namespace {

void require_gradient(std::span<const Complex> z, std::span<const Complex> gradient) {
    if (z.size() != gradient.size()) throw DomainError("gradient length does not match the point dimension");
}

// Indices of the `count` largest values, ties broken by the lower index.
std::vector<std::size_t> top_indices(const std::vector<double>& values, std::size_t count) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    count = std::min(count, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return values[a] > values[b] || (values[a] == values[b] && a < b);
                      });
    order.resize(count);
    return order;
}

struct Refined {
    double value;
    std::vector<Complex> point;
};

// Sampled maximum, then pattern search from the best starts.
template <class Objective>
Refined refine_max(const std::vector<double>& sampled, const BoundaryWeightedSampler& sampler,
                   const BlochOptions& options, Objective objective) {
    const std::vector<std::size_t> starts = top_indices(sampled, options.refine_starts);
    std::vector<PatternSearchResult> results(starts.size());
    for_each_index(options.execution, starts.size(), [&](std::size_t t) {
        results[t] = pattern_search(
            sampler.coords(starts[t]), sampled[starts[t]], objective,
            [](const std::vector<Complex>&) { return true; }, options.refine_iters, 0.05);
    });
    Refined best{sampled[starts.front()], sampler.coords(starts.front())};
    for (const auto& r : results) {
        if (r.value > best.value) best = {r.value, r.point};
    }
    return best;
}

} // namespace

double bloch_q(std::span<const Complex> z, std::span<const Complex> gradient) {
    require_gradient(z, gradient);
    double sum = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double w = disc_weight(z[j]);
        sum += w * w * std::norm(gradient[j]);
    }
    return std::sqrt(sum);
}

double bloch_g(std::span<const Complex> z, std::span<const Complex> gradient) {
    require_gradient(z, gradient);
    double sum = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) sum += disc_weight(z[j]) * std::abs(gradient[j]);
    return sum;
}

double bloch_max_term(std::span<const Complex> z, std::span<const Complex> gradient) {
    require_gradient(z, gradient);
    double m = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) m = std::max(m, disc_weight(z[j]) * std::abs(gradient[j]));
    return m;
}

double bloch_q(const Expr& f, const PolydiscPoint& z) { return bloch_q(z.coords(), eval_jet(f, z).partials); }

double bloch_g(const Expr& f, const PolydiscPoint& z) { return bloch_g(z.coords(), eval_jet(f, z).partials); }

double bloch_max_term(const Expr& f, const PolydiscPoint& z) {
    return bloch_max_term(z.coords(), eval_jet(f, z).partials);
}

Complex radial_derivative(const Expr& f, const PolydiscPoint& z) {
    const Jet jet = eval_jet(f, z);
    Complex sum{};
    for (std::size_t j = 0; j < z.dim(); ++j) sum += z[j] * jet.partials[j];
    return sum;
}

std::vector<Complex> maximizing_direction(std::span<const Complex> z, std::span<const Complex> gradient) {
    require_gradient(z, gradient);
    std::vector<Complex> u(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double w = disc_weight(z[j]);
        u[j] = w * w * std::conj(gradient[j]);
    }
    return u;
}

double directional_quotient(std::span<const Complex> z, std::span<const Complex> gradient,
                            std::span<const Complex> u) {
    require_gradient(z, gradient);
    if (u.size() != z.size()) throw DomainError("direction length does not match the point dimension");
    Complex pairing{};
    double metric = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        pairing += gradient[j] * u[j];
        const double w = disc_weight(z[j]);
        metric += std::norm(u[j]) / (w * w);
    }
    if (!(metric > 0.0)) throw DomainError("direction must be nonzero");
    return std::abs(pairing) / std::sqrt(metric);
}

BlochNormEstimate estimate_bloch_norms(const Expr& f, std::size_t dim, const BlochOptions& options) {
    if (dim == 0) throw DomainError("estimate_bloch_norms: dimension must be at least 1");
    if (f.variable_bound() > dim) throw DomainError("estimate_bloch_norms: expression uses a variable beyond the dimension");
    if (options.refine_starts == 0) throw DomainError("estimate_bloch_norms: need at least one refinement start");

    const BoundaryWeightedSampler sampler(dim, options.seed);
    const std::size_t count = options.budget + 1;
    const kernels::BlochSamples samples = options.execution == Execution::parallel
                                              ? kernels::bloch_samples(f, sampler, count)
                                              : kernels::reference::bloch_samples(f, sampler, count);

    BlochNormEstimate est;
    est.sample_budget = options.budget;
    est.value_at_origin = std::abs(eval_scalar(f, std::vector<Complex>(dim)));
    est.sampled_seminorm_B = *std::max_element(samples.q.begin(), samples.q.end());
    est.sampled_sup_G = *std::max_element(samples.g.begin(), samples.g.end());

    const Refined q = refine_max(samples.q, sampler, options, [&](const std::vector<Complex>& z) {
        return bloch_q(z, eval_jet(f, z).partials);
    });
    const Refined g = refine_max(samples.g, sampler, options, [&](const std::vector<Complex>& z) {
        return bloch_g(z, eval_jet(f, z).partials);
    });

    est.seminorm_B = q.value;
    est.argmax_point = q.point;
    est.argmax_point_G = g.point;
    est.norm_1 = est.value_at_origin + q.value;
    est.norm_G = est.value_at_origin + g.value;
    return est;
}

} // namespace polybloch
