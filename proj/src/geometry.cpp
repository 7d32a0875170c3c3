#include "polybloch/geometry.hpp"

#include "polybloch/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polybloch {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
    }
}

void require_in_disc(Complex z, const char* what) {
    if (!is_finite(z) || std::abs(z) >= 1.0) {
        throw DomainError(std::string(what) + ": argument not in the open unit disc");
    }
}

} // namespace

bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double disc_weight(Complex z) noexcept {
    const double r = std::abs(z);
    return (1.0 - r) * (1.0 + r);
}

PolydiscPoint::PolydiscPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainError("PolydiscPoint: dimension must be at least 1");
    for (std::size_t j = 0; j < coords_.size(); ++j) {
        if (!is_finite(coords_[j])) {
            throw DomainError("PolydiscPoint: coordinate " + std::to_string(j + 1) + " is not finite");
        }
        if (std::abs(coords_[j]) >= 1.0 - kInteriorMargin) {
            throw DomainError("PolydiscPoint: coordinate " + std::to_string(j + 1) +
                              " is not strictly inside the unit disc");
        }
    }
}

PolydiscPoint PolydiscPoint::origin(std::size_t dim) { return PolydiscPoint(std::vector<Complex>(dim)); }

Direction::Direction(std::vector<Complex> components) : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("Direction: dimension must be at least 1");
    bool nonzero = false;
    for (const Complex& c : components_) {
        if (!is_finite(c)) throw DomainError("Direction: component is not finite");
        nonzero = nonzero || c != Complex{};
    }
    if (!nonzero) throw DomainError("Direction: zero vector");
}

double sup_norm(std::span<const Complex> z) {
    double m = 0.0;
    for (const Complex& c : z) m = std::max(m, std::abs(c));
    return m;
}

double sup_norm(const PolydiscPoint& z) { return sup_norm(z.coords()); }

double rho(Complex z, Complex w) {
    require_in_disc(z, "rho");
    require_in_disc(w, "rho");
    // 1 - z conj(w), spelled out so that swapping z and w only flips the sign
    // of the imaginary part.
    const double re = 1.0 - (z.real() * w.real() + z.imag() * w.imag());
    const double im = z.real() * w.imag() - z.imag() * w.real();
    const double num = std::hypot(z.real() - w.real(), z.imag() - w.imag());
    const double den = std::hypot(re, im);
    return std::min(num / den, 1.0);
}

double rho_complement(Complex z, Complex w) {
    require_in_disc(z, "rho_complement");
    require_in_disc(w, "rho_complement");
    const double re = 1.0 - (z.real() * w.real() + z.imag() * w.imag());
    const double im = z.real() * w.imag() - z.imag() * w.real();
    const double den = re * re + im * im;
    return disc_weight(z) * disc_weight(w) / den;
}

double hyperbolic_length(double t) {
    if (!(t >= 0.0) || t >= 1.0) throw DomainError("hyperbolic_length: t must lie in [0, 1)");
    return 0.5 * (std::log1p(t) - std::log1p(-t));
}

double hyperbolic_length(double t, double one_minus_t_squared) {
    if (!(t >= 0.0) || t > 1.0) throw DomainError("hyperbolic_length: t must lie in [0, 1]");
    if (t <= 0.5) return 0.5 * (std::log1p(t) - std::log1p(-t));
    // (1/2) log((1+t)^2 / (1-t^2)); finite whenever the complement is positive.
    if (!(one_minus_t_squared > 0.0)) throw DomainError("hyperbolic_length: complement must be positive");
    return std::log1p(t) - 0.5 * std::log(one_minus_t_squared);
}

std::vector<Complex> moebius_raw(std::span<const Complex> a, std::span<const Complex> w) {
    require_same_dim(a.size(), w.size(), "moebius");
    std::vector<Complex> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out[j] = (w[j] - a[j]) / (1.0 - std::conj(a[j]) * w[j]);
    }
    return out;
}

PolydiscPoint moebius(const PolydiscPoint& a, const PolydiscPoint& w) {
    return PolydiscPoint(moebius_raw(a.coords(), w.coords()));
}

double kobayashi_raw(std::span<const Complex> z, std::span<const Complex> w) {
    require_same_dim(z.size(), w.size(), "kobayashi");
    double t = 0.0;
    double complement = 1.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double r = rho(z[j], w[j]);
        if (r > t) {
            t = r;
            complement = rho_complement(z[j], w[j]);
        }
    }
    return hyperbolic_length(t, complement);
}

double kobayashi(const PolydiscPoint& z, const PolydiscPoint& w) { return kobayashi_raw(z.coords(), w.coords()); }

Complex bergman_form(const PolydiscPoint& z, std::span<const Complex> u, std::span<const Complex> v) {
    require_same_dim(z.dim(), u.size(), "bergman_metric");
    require_same_dim(z.dim(), v.size(), "bergman_metric");
    Complex sum{};
    for (std::size_t j = 0; j < z.dim(); ++j) {
        const double weight = disc_weight(z[j]);
        sum += u[j] * std::conj(v[j]) / (weight * weight);
    }
    return sum;
}

Complex bergman_metric(const PolydiscPoint& z, const Direction& u, const Direction& v) {
    return bergman_form(z, u.components(), v.components());
}

} // namespace polybloch
