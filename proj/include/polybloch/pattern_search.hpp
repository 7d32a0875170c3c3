#pragma once

#include "polybloch/error.hpp"
#include "polybloch/geometry.hpp"
#include "polybloch/sampling.hpp"

#include <cmath>
#include <vector>

namespace polybloch {

struct PatternSearchResult {
    std::vector<Complex> point;
    double value = 0.0;
    unsigned improvements = 0;
};

// Derivative-free compass search maximizing `objective` over the polydisc.
// Every iteration tries +-step along each of the 2n real coordinate axes and
// moves to the best improving trial; if none improves, the step is halved.
// Trials leaving radius kSampleRadiusCap are pulled back radially. Trials at
// which `objective` throws EvalError or `admissible` is false are skipped.
template <class Objective, class Admissible>
PatternSearchResult pattern_search(std::vector<Complex> start, double start_value, Objective&& objective,
                                   Admissible&& admissible, unsigned iterations, double initial_step) {
    PatternSearchResult best{std::move(start), start_value, 0};
    double step = initial_step;
    std::vector<Complex> trial;
    std::vector<Complex> best_trial;
    for (unsigned it = 0; it < iterations; ++it) {
        double best_trial_value = best.value;
        bool improved = false;
        for (std::size_t axis = 0; axis < 2 * best.point.size(); ++axis) {
            for (const double sign : {1.0, -1.0}) {
                trial = best.point;
                Complex& c = trial[axis / 2];
                c += (axis % 2 == 0) ? Complex(sign * step, 0.0) : Complex(0.0, sign * step);
                const double r = std::abs(c);
                if (r > kSampleRadiusCap) c *= kSampleRadiusCap / r;
                double value;
                try {
                    if (!admissible(trial)) continue;
                    value = objective(trial);
                } catch (const EvalError&) {
                    continue;
                }
                if (value > best_trial_value) {
                    best_trial_value = value;
                    best_trial = trial;
                    improved = true;
                }
            }
        }
        if (improved) {
            best.point = best_trial;
            best.value = best_trial_value;
            ++best.improvements;
        } else {
            step *= 0.5;
        }
    }
    return best;
}

} // namespace polybloch
