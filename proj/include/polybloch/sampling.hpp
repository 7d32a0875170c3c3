#pragma once

#include "polybloch/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace polybloch {

// Largest coordinate modulus produced by samplers and refinement steps.
inline constexpr double kSampleRadiusCap = 1.0 - 1e-10;

// Nested, seeded low-discrepancy point set on the polydisc of radius
// `outer_radius`. Index 0 is the origin; index k >= 1 is the k-th point of a
// Cranley-Patterson rotated Halton sequence in 2n dimensions, mapped per
// coordinate to radius outer_radius * (1 - (1-u)^3) and angle 2*pi*v. The
// cubic warp pushes mass toward the boundary. Point k does not depend on how
// many points are requested, so a larger budget always contains a smaller one.
class BoundaryWeightedSampler {
public:
    BoundaryWeightedSampler(std::size_t dim, std::uint64_t seed, double outer_radius = 1.0);

    std::size_t dim() const noexcept { return dim_; }

    void fill(std::size_t index, std::span<Complex> out) const;
    std::vector<Complex> coords(std::size_t index) const;
    PolydiscPoint point(std::size_t index) const { return PolydiscPoint(coords(index)); }

private:
    std::size_t dim_;
    double outer_radius_;
    std::vector<std::uint32_t> bases_;
    std::vector<double> shifts_;
};

// Van der Corput radical inverse of `index` in `base`.
double radical_inverse(std::uint64_t index, std::uint32_t base);

// First `count` primes.
std::vector<std::uint32_t> first_primes(std::size_t count);

// Mixes (seed, stream, index) into an independent engine so that trial i of a
// randomized check draws the same numbers however trials are split across
// threads.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Uniform sample of the disc of radius `radius`, with a fraction of draws
// pushed toward the rim through the cubic warp.
Complex random_disc_point(std::mt19937_64& rng, double radius);

std::vector<Complex> random_polydisc_point(std::mt19937_64& rng, std::size_t dim, double radius = kSampleRadiusCap);

// Standard complex Gaussian vector (isotropic direction after normalization).
std::vector<Complex> random_gaussian_vector(std::mt19937_64& rng, std::size_t dim);

double uniform01(std::mt19937_64& rng);

} // namespace polybloch
