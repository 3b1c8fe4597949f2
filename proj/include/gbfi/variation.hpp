#pragma once

#include <map>
#include <string>

#include "gbfi/feynman.hpp"

namespace gbfi {

// Directions (g1, g2) for the two path arguments.
struct DirectionPair {
    HPrimeElement g1;
    HPrimeElement g2;
};

// One closed-form equality check: lhs vs rhs at a pinned tolerance. Relative
// error is used unless |lhs| is essentially zero, where the absolute error
// takes over.
struct IdentityReport {
    std::string name;
    Complex lhs{0.0, 0.0};
    Complex rhs{0.0, 0.0};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, double> details;
};

IdentityReport make_identity_report(std::string name, Complex lhs, Complex rhs, double tolerance);

// Directional derivative of the functional at (x1, x2):
// dF = sum_k c_k i [ (A1^{1/2} w_k, g1) + (A2^{1/2} w_k, g2) ] e^{i phases}
Complex first_variation_closed(const DiscreteMeasure& f, const OperatorPair& ops,
                               const DirectionPair& dirs, const SamplePath& x1,
                               const SamplePath& x2, const FunctionSpace& space);

// Central difference of eval_fresnel along (g1, g2) with step h.
Complex first_variation_numeric(const DiscreteMeasure& f, const OperatorPair& ops,
                                const DirectionPair& dirs, const SamplePath& x1,
                                const SamplePath& x2, const FunctionSpace& space, double h);

// Analytic Feynman integral of the first variation (the variation is itself
// a linear-weighted functional of the same class).
Complex feynman_of_variation(const DiscreteMeasure& f, const OperatorPair& ops,
                             const DirectionPair& dirs, const FeynmanParams& params,
                             const FunctionSpace& space);

// Analytic Feynman integral of F weighted by the linear factor
// q1 <g1, x1> + q2 <g2, x2>, continued from real lambda:
// sum_k c_k sum_j q_j (-i q_j)^{-1/2} [ (g_j, a) + i (-i q_j)^{-1/2} (A_j^{1/2} w_k, g_j) ] psi_k
Complex feynman_linear_weighted(const DiscreteMeasure& f, const OperatorPair& ops,
                                const DirectionPair& dirs, const FeynmanParams& params,
                                const FunctionSpace& space);

// Integration-by-parts identity linking the two integrals above:
// E^anf[dF] = -i * feynman_linear_weighted
//             - sum_j (-i q_j)^{1/2} (g_j, a) * E^anf[F]
IdentityReport verify_cs_feynman(const DiscreteMeasure& f, const OperatorPair& ops,
                                 const DirectionPair& dirs, const FeynmanParams& params,
                                 const FunctionSpace& space, double tolerance);

// Main display at q = (1, -1) with directions (A+^{1/2} g, -A-^{1/2} g):
// lhs = E^anf[ F * { <A+^{1/2} g, x1> + <A-^{1/2} g, x2> } ]
// rhs = i { (-i)^{1/2} (g, vartheta+^{1/2} . a) - (i)^{1/2} (g, vartheta-^{1/2} . a) } E^anf[F]
//       - sum_k c_k (A w_k, g) psi_k
IdentityReport verify_final_display(const DiscreteMeasure& f, const ThetaOperator& theta,
                                    const HPrimeElement& g, const FunctionSpace& space,
                                    double tolerance);

// Hard-coded specializations of the main display for theta = 1 (which = 1,
// single-space functional on x1) and theta = -1 (which = 2, on x2), each
// cross-checked against the general evaluation path.
IdentityReport step2_explicit(const DiscreteMeasure& f, const HPrimeElement& g,
                              const FunctionSpace& space, int which, double tolerance);

} // namespace gbfi
