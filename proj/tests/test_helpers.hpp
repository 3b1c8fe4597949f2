#pragma once

// Shared fixtures for the unit tests: space construction shorthands and an
// independent composite-Simpson quadrature used as the oracle for every
// closed-form integral the library is expected to reproduce.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gbfi/config.hpp"
#include "gbfi/feynman.hpp"
#include "gbfi/function_space.hpp"
#include "gbfi/measure.hpp"
#include "gbfi/operators.hpp"
#include "gbfi/simulator.hpp"
#include "gbfi/variation.hpp"

namespace gbfi_test {

using gbfi::Complex;
using gbfi::FunctionSpace;
using gbfi::HPrimeElement;
using gbfi::MeanVarPair;
using gbfi::ParametricFunction;
using gbfi::TimeGrid;

inline FunctionSpace make_space(ParametricFunction a, ParametricFunction b, int cells,
                                double horizon = 1.0) {
    return FunctionSpace(MeanVarPair{std::move(a), std::move(b)},
                         TimeGrid::uniform(horizon, cells));
}

inline FunctionSpace standard_space(int cells, double horizon = 1.0) {
    return make_space(ParametricFunction::zero(), ParametricFunction::linear(1.0), cells,
                      horizon);
}

inline HPrimeElement element(ParametricFunction density) {
    return HPrimeElement{std::move(density)};
}

// Composite Simpson rule, independent of the library quadrature (node-based
// rather than midpoint, different weights, different resolution).
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    if (n % 2 != 0)
        ++n;
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int j = 1; j < n; ++j)
        acc += f(lo + j * h) * (j % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Deterministic pseudo-path for quadrature-level identities that need a
// plausible trajectory but no randomness.
inline gbfi::SamplePath wiggle_path(const FunctionSpace& space, double scale = 1.0) {
    std::vector<double> values(static_cast<std::size_t>(space.cells()) + 1, 0.0);
    for (int j = 1; j <= space.cells(); ++j) {
        double t = space.grid().node(j);
        values[static_cast<std::size_t>(j)] =
            scale * (std::sin(5.0 * t) + 0.25 * t * t - 0.4 * t);
    }
    return gbfi::SamplePath{space.grid(), std::move(values)};
}

// One-atom measure with unit weight.
inline gbfi::DiscreteMeasure single_atom(Complex weight, HPrimeElement w) {
    gbfi::DiscreteMeasure f;
    f.atoms.push_back({weight, std::move(w)});
    return f;
}

// Small random polynomial density with coefficients in [-1, 1].
inline ParametricFunction random_poly(std::mt19937_64& rng, int degree = 2) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    for (double& c : coeffs)
        c = unit(rng);
    return ParametricFunction::polynomial(std::move(coeffs));
}

} // namespace gbfi_test
