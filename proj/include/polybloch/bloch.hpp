#pragma once

#include "polybloch/geometry.hpp"
#include "polybloch/parallel.hpp"
#include "polybloch/symbols.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace polybloch {

// Pointwise Bloch quantities from a point and the gradient of f there.
//
//   Q_f(z) = sqrt(sum_j (1-|z_j|^2)^2 |d_j f(z)|^2)
//   G_f(z) = sum_j (1-|z_j|^2) |d_j f(z)|
//
// The closed form of Q_f is the dual norm of the gradient for the Bergman
// metric; the supremum over directions it replaces is kept as a test oracle.
double bloch_q(std::span<const Complex> z, std::span<const Complex> gradient);
double bloch_g(std::span<const Complex> z, std::span<const Complex> gradient);
// max_j (1-|z_j|^2) |d_j f(z)|, the middle term of the equivalence chain
double bloch_max_term(std::span<const Complex> z, std::span<const Complex> gradient);

double bloch_q(const Expr& f, const PolydiscPoint& z);
double bloch_g(const Expr& f, const PolydiscPoint& z);
double bloch_max_term(const Expr& f, const PolydiscPoint& z);

// Rf(z) = sum_j z_j d_j f(z)
Complex radial_derivative(const Expr& f, const PolydiscPoint& z);

// Direction u* with u*_j = (1-|z_j|^2)^2 conj(d_j f(z)) at which the
// directional quotient |grad f . u| / H_z(u, conj u)^(1/2) equals Q_f(z).
std::vector<Complex> maximizing_direction(std::span<const Complex> z, std::span<const Complex> gradient);

// |grad f . u| / H_z(u, conj u)^(1/2) for one direction.
double directional_quotient(std::span<const Complex> z, std::span<const Complex> gradient, std::span<const Complex> u);

struct BlochOptions {
    std::size_t budget = 20000;
    std::uint64_t seed = 0;
    unsigned refine_iters = 40;
    std::size_t refine_starts = 8;
    Execution execution = Execution::parallel;
};

// Sampled suprema are lower estimates of the true suprema over U^n.
struct BlochNormEstimate {
    double seminorm_B = 0.0;  // sup Q_f
    double norm_1 = 0.0;      // |f(0)| + sup Q_f
    double norm_G = 0.0;      // |f(0)| + sup G_f
    double value_at_origin = 0.0;
    double sampled_seminorm_B = 0.0;  // before refinement; monotone in budget
    double sampled_sup_G = 0.0;
    std::vector<Complex> argmax_point;   // of Q_f
    std::vector<Complex> argmax_point_G; // of G_f
    std::size_t sample_budget = 0;
    bool is_lower_estimate = true;
};

BlochNormEstimate estimate_bloch_norms(const Expr& f, std::size_t dim, const BlochOptions& options = {});

} // namespace polybloch
