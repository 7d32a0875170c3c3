#include "polybloch/sampling.hpp"

#include "polybloch/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polybloch {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

Complex warped_polar(double u, double v, double radius) {
    const double s = 1.0 - u;
    const double r = std::min(radius * (1.0 - s * s * s), kSampleRadiusCap);
    const double theta = 2.0 * std::numbers::pi * v;
    Complex z = std::polar(r, theta);
    // rounding in cos/sin can push |z| a ulp past r
    while (std::abs(z) > r) z *= 1.0 - 0x1.0p-52;
    return z;
}

} // namespace

double radical_inverse(std::uint64_t index, std::uint32_t base) {
    const double inv_base = 1.0 / base;
    double factor = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv_base;
    }
    return result;
}

std::vector<std::uint32_t> first_primes(std::size_t count) {
    std::vector<std::uint32_t> primes;
    for (std::uint32_t candidate = 2; primes.size() < count; ++candidate) {
        const bool prime = std::none_of(primes.begin(), primes.end(), [&](std::uint32_t p) {
            return p * p <= candidate && candidate % p == 0;
        });
        if (prime) primes.push_back(candidate);
    }
    return primes;
}

BoundaryWeightedSampler::BoundaryWeightedSampler(std::size_t dim, std::uint64_t seed, double outer_radius)
    : dim_(dim), outer_radius_(outer_radius), bases_(first_primes(2 * dim)), shifts_(2 * dim) {
    if (dim == 0) throw DomainError("sampler: dimension must be at least 1");
    if (!(outer_radius > 0.0) || outer_radius > 1.0) throw DomainError("sampler: radius must lie in (0, 1]");
    for (std::size_t k = 0; k < shifts_.size(); ++k) shifts_[k] = unit_from_bits(mix64(seed ^ mix64(k + 1)));
}

void BoundaryWeightedSampler::fill(std::size_t index, std::span<Complex> out) const {
    if (index == 0) {
        std::fill(out.begin(), out.end(), Complex{});
        return;
    }
    for (std::size_t j = 0; j < dim_; ++j) {
        double u = radical_inverse(index, bases_[2 * j]) + shifts_[2 * j];
        double v = radical_inverse(index, bases_[2 * j + 1]) + shifts_[2 * j + 1];
        u -= std::floor(u);
        v -= std::floor(v);
        out[j] = warped_polar(u, v, outer_radius_);
    }
}

std::vector<Complex> BoundaryWeightedSampler::coords(std::size_t index) const {
    std::vector<Complex> out(dim_);
    fill(index, out);
    return out;
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return std::mt19937_64(mix64(seed ^ mix64(stream ^ mix64(index))));
}

double uniform01(std::mt19937_64& rng) { return unit_from_bits(rng()); }

Complex random_disc_point(std::mt19937_64& rng, double radius) {
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    if (uniform01(rng) < 0.5) {
        // area-uniform
        const double r = std::min(radius * std::sqrt(u), kSampleRadiusCap);
        Complex z = std::polar(r, 2.0 * std::numbers::pi * v);
        while (std::abs(z) > r) z *= 1.0 - 0x1.0p-52;
        return z;
    }
    return warped_polar(u, v, radius);
}

std::vector<Complex> random_polydisc_point(std::mt19937_64& rng, std::size_t dim, double radius) {
    std::vector<Complex> z(dim);
    for (auto& c : z) c = random_disc_point(rng, radius);
    return z;
}

std::vector<Complex> random_gaussian_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> normal;
    std::vector<Complex> u(dim);
    for (auto& c : u) {
        const double re = normal(rng);
        c = Complex(re, normal(rng));
    }
    return u;
}

} // namespace polybloch
