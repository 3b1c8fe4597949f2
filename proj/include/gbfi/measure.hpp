#pragma once

#include <complex>
#include <vector>

#include "gbfi/function_space.hpp"

namespace gbfi {

// Finitely supported complex measure on the element space: f corresponds to
// the functional sum_k weight_k exp{i <.,.> pairings of element_k}.
struct DiscreteMeasure {
    struct Atom {
        std::complex<double> weight;
        HPrimeElement element;
    };
    std::vector<Atom> atoms;

    double total_variation() const {
        double acc = 0.0;
        for (const Atom& atom : atoms)
            acc += std::abs(atom.weight);
        return acc;
    }
};

// Single unit mass at the zero element; the associated functional is 1.
inline DiscreteMeasure delta_at_zero() {
    return DiscreteMeasure{{{std::complex<double>(1.0, 0.0),
                             HPrimeElement{ParametricFunction::zero()}}}};
}

} // namespace gbfi
