#pragma once

#include <complex>

#include "gbfi/measure.hpp"
#include "gbfi/operators.hpp"

namespace gbfi {

using Complex = std::complex<double>;

// Real nonzero analytic-continuation parameters, one per path argument.
struct FeynmanParams {
    double q1 = 1.0;
    double q2 = -1.0;

    double at(int j) const { return j == 0 ? q1 : q2; }
};

void validate_params(const FeynmanParams& params); // throws InvalidParameter on q_j = 0

// Principal square root of -i q (positive real part for every real q != 0).
Complex sqrt_neg_iq(double q);

// F(x1, x2) = sum_k c_k exp{ i [ <A1^{1/2} w_k, x1> + <A2^{1/2} w_k, x2> ] }
Complex eval_fresnel(const DiscreteMeasure& f, const OperatorPair& ops, const SamplePath& x1,
                     const SamplePath& x2, const FunctionSpace& space);

// One atom of the analytic continuation at lambda_j = -i q_j:
// exp{ sum_j [ -i (A_j w, w) / (2 q_j) + i (-i q_j)^{-1/2} (A_j^{1/2} w, a) ] }
Complex psi(const FeynmanParams& params, const OperatorPair& ops, const HPrimeElement& w,
            const FunctionSpace& space);

// Analytic Feynman integral of the functional attached to f.
Complex feynman_integral(const DiscreteMeasure& f, const OperatorPair& ops,
                         const FeynmanParams& params, const FunctionSpace& space);

// J(lambda) = E[F(lambda_1^{-1/2} x1, lambda_2^{-1/2} x2)] in closed form,
// analytic for Re(lambda_j) > 0 and continuous down to the ray lambda = -i q.
Complex analytic_J(const DiscreteMeasure& f, const OperatorPair& ops, Complex lambda1,
                   Complex lambda2, const FunctionSpace& space);

// Growth bound of one atom:
// k(q0; A; w) = exp{ sum_j (2 q0)^{-1/2} ||A_j^{1/2}||_o ||w|| ||a|| }
double k_bound(double q0, const OperatorPair& ops, const HPrimeElement& w,
               const FunctionSpace& space);

// Dominating bounds for the functional and its first variation.
struct ClassReport {
    double f_bound = 0.0; // sum_k |c_k| k(q0; A; w_k)
    double g_bound = 0.0; // sum_k |c_k| ||w_k|| k(q0; A; w_k)
};

ClassReport class_report(const DiscreteMeasure& f, double q0, const OperatorPair& ops,
                         const FunctionSpace& space);

} // namespace gbfi
