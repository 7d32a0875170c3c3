#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace polybloch {

using Complex = std::complex<double>;

// Points with some |z_j| >= 1 - kInteriorMargin are rejected as not strictly
// inside the polydisc.
inline constexpr double kInteriorMargin = 1e-14;

bool is_finite(Complex z) noexcept;

// A point of the open unit polydisc U^n. Immutable once built.
class PolydiscPoint {
public:
    explicit PolydiscPoint(std::vector<Complex> coords);

    static PolydiscPoint origin(std::size_t dim);

    std::size_t dim() const noexcept { return coords_.size(); }
    Complex operator[](std::size_t j) const { return coords_[j]; }
    std::span<const Complex> coords() const noexcept { return coords_; }

    friend bool operator==(const PolydiscPoint&, const PolydiscPoint&) = default;

private:
    std::vector<Complex> coords_;
};

// A nonzero tangent vector in C^n.
class Direction {
public:
    explicit Direction(std::vector<Complex> components);

    std::size_t dim() const noexcept { return components_.size(); }
    Complex operator[](std::size_t j) const { return components_[j]; }
    std::span<const Complex> components() const noexcept { return components_; }

private:
    std::vector<Complex> components_;
};

// max_j |z_j|
double sup_norm(std::span<const Complex> z);
double sup_norm(const PolydiscPoint& z);

// Pseudo-hyperbolic distance on the disc, |z - w| / |1 - z conj(w)|.
// Symmetric in its arguments bit for bit.
double rho(Complex z, Complex w);

// 1 - rho(z, w)^2, evaluated as (1-|z|^2)(1-|w|^2)/|1 - z conj(w)|^2 so that it
// stays accurate (and positive) when rho is within rounding of 1.
double rho_complement(Complex z, Complex w);

// t -> (1/2) log((1+t)/(1-t)) = artanh(t) on [0, 1).
double hyperbolic_length(double t);

// artanh(t) when the caller also has 1 - t^2 from an accurate formula.
double hyperbolic_length(double t, double one_minus_t_squared);

// Componentwise disc automorphism phi_a(w)_j = (w_j - a_j) / (1 - conj(a_j) w_j).
std::vector<Complex> moebius_raw(std::span<const Complex> a, std::span<const Complex> w);
PolydiscPoint moebius(const PolydiscPoint& a, const PolydiscPoint& w);

// Kobayashi distance of U^n: artanh(|||phi_z(w)|||).
double kobayashi(const PolydiscPoint& z, const PolydiscPoint& w);

// Same distance for raw coordinate tuples already known to lie in U^n (the
// outputs of a validated map). Only modulus < 1 is checked.
double kobayashi_raw(std::span<const Complex> z, std::span<const Complex> w);

// Bergman metric H_z(u, conj v) = sum_j u_j conj(v_j) / (1 - |z_j|^2)^2.
Complex bergman_metric(const PolydiscPoint& z, const Direction& u, const Direction& v);
Complex bergman_form(const PolydiscPoint& z, std::span<const Complex> u, std::span<const Complex> v);

// 1 - |z|^2 computed as (1 - |z|)(1 + |z|).
double disc_weight(Complex z) noexcept;

} // namespace polybloch
