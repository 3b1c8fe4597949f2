#include "gbfi/feynman.hpp"

#include <cmath>

namespace gbfi {

void validate_params(const FeynmanParams& params) {
    if (params.q1 == 0.0 || params.q2 == 0.0)
        throw InvalidParameter("continuation parameters q must be nonzero");
    if (!std::isfinite(params.q1) || !std::isfinite(params.q2))
        throw InvalidParameter("continuation parameters q must be finite");
}

Complex sqrt_neg_iq(double q) { return std::sqrt(Complex(0.0, -q)); }

Complex eval_fresnel(const DiscreteMeasure& f, const OperatorPair& ops, const SamplePath& x1,
                     const SamplePath& x2, const FunctionSpace& space) {
    Complex acc(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        double phase = space.pwz(ops.a1.root.apply(atom.element), x1) +
                       space.pwz(ops.a2.root.apply(atom.element), x2);
        acc += atom.weight * std::exp(Complex(0.0, phase));
    }
    return acc;
}

Complex psi(const FeynmanParams& params, const OperatorPair& ops, const HPrimeElement& w,
            const FunctionSpace& space) {
    validate_params(params);
    const HPrimeElement& a = space.mean_element();
    Complex exponent(0.0, 0.0);
    for (int j = 0; j < 2; ++j) {
        double q = params.at(j);
        const OperatorFactorization& op = ops.at(j);
        double quad = quadratic_form(op.op, w, space);
        double lin = bilinear_form(op.root, w, a, space); // (A_j^{1/2} w, a)
        exponent += Complex(0.0, -quad / (2.0 * q));
        exponent += Complex(0.0, 1.0) / sqrt_neg_iq(q) * lin;
    }
    return std::exp(exponent);
}

Complex feynman_integral(const DiscreteMeasure& f, const OperatorPair& ops,
                         const FeynmanParams& params, const FunctionSpace& space) {
    Complex acc(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms)
        acc += atom.weight * psi(params, ops, atom.element, space);
    return acc;
}

Complex analytic_J(const DiscreteMeasure& f, const OperatorPair& ops, Complex lambda1,
                   Complex lambda2, const FunctionSpace& space) {
    if (lambda1 == Complex(0.0, 0.0) || lambda2 == Complex(0.0, 0.0))
        throw InvalidParameter("analytic continuation parameters must be nonzero");
    if (lambda1.real() < 0.0 || lambda2.real() < 0.0)
        throw InvalidParameter("analytic continuation requires Re(lambda) >= 0");
    const HPrimeElement& a = space.mean_element();
    const Complex lambdas[2] = {lambda1, lambda2};
    Complex acc(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        Complex exponent(0.0, 0.0);
        for (int j = 0; j < 2; ++j) {
            const OperatorFactorization& op = ops.at(j);
            double quad = quadratic_form(op.op, atom.element, space);
            double lin = bilinear_form(op.root, atom.element, a, space);
            exponent += -quad / (2.0 * lambdas[j]);
            exponent += Complex(0.0, 1.0) / std::sqrt(lambdas[j]) * lin;
        }
        acc += atom.weight * std::exp(exponent);
    }
    return acc;
}

double k_bound(double q0, const OperatorPair& ops, const HPrimeElement& w,
               const FunctionSpace& space) {
    if (!(q0 > 0.0))
        throw InvalidParameter("growth bound needs q0 > 0");
    double w_norm = std::sqrt(space.norm_sq(w));
    double a_norm = std::sqrt(space.norm_sq(space.mean_element()));
    double coef = 1.0 / std::sqrt(2.0 * q0);
    double exponent = 0.0;
    for (int j = 0; j < 2; ++j)
        exponent += coef * ops.at(j).root.operator_norm(space) * w_norm * a_norm;
    return std::exp(exponent);
}

ClassReport class_report(const DiscreteMeasure& f, double q0, const OperatorPair& ops,
                         const FunctionSpace& space) {
    ClassReport out;
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        double k = k_bound(q0, ops, atom.element, space);
        double mass = std::abs(atom.weight);
        out.f_bound += mass * k;
        out.g_bound += mass * std::sqrt(space.norm_sq(atom.element)) * k;
    }
    return out;
}

} // namespace gbfi
