#pragma once

#include "gbfi/function_space.hpp"

namespace gbfi {

// Bounded self-adjoint operator acting on elements by multiplying the
// density: D(Lw) = symbol * Dw. Identity and zero are the constant symbols.
class LinearOperator {
public:
    static LinearOperator identity() { return LinearOperator(ParametricFunction::constant(1.0)); }
    static LinearOperator zero() { return LinearOperator(ParametricFunction::zero()); }
    static LinearOperator multiplication(ParametricFunction symbol) {
        return LinearOperator(std::move(symbol));
    }

    HPrimeElement apply(const HPrimeElement& w) const {
        return HPrimeElement{ParametricFunction::product(symbol_, w.density)};
    }
    const ParametricFunction& symbol() const { return symbol_; }
    bool is_zero() const { return symbol_.is_zero(); }

    // sup of |symbol| over the grid midpoints
    double operator_norm(const FunctionSpace& space) const;

private:
    explicit LinearOperator(ParametricFunction symbol) : symbol_(std::move(symbol)) {}
    ParametricFunction symbol_;
};

// (Op w, g) = int symbol Dw Dg db
double bilinear_form(const LinearOperator& op, const HPrimeElement& w, const HPrimeElement& g,
                     const FunctionSpace& space);
inline double quadratic_form(const LinearOperator& op, const HPrimeElement& w,
                             const FunctionSpace& space) {
    return bilinear_form(op, w, w, space);
}

// Operator A built from an element vartheta by A w = int theta dw with
// theta = D(vartheta). Splits into nonnegative parts A = A+ - A- through the
// pointwise sign split of theta, with square roots acting by sqrt(theta+-).
struct ThetaOperator {
    HPrimeElement vartheta;
    ParametricFunction theta;
    ParametricFunction theta_pos, theta_neg;
    ParametricFunction sqrt_theta_pos, sqrt_theta_neg;

    static ThetaOperator from_element(HPrimeElement vt);

    LinearOperator full() const { return LinearOperator::multiplication(theta); }
    LinearOperator plus() const { return LinearOperator::multiplication(theta_pos); }
    LinearOperator minus() const { return LinearOperator::multiplication(theta_neg); }
    LinearOperator sqrt_plus() const { return LinearOperator::multiplication(sqrt_theta_pos); }
    LinearOperator sqrt_minus() const { return LinearOperator::multiplication(sqrt_theta_neg); }

    // elements vartheta+-^{1/2} with densities sqrt(theta+-)
    HPrimeElement vartheta_half_plus() const { return HPrimeElement{sqrt_theta_pos}; }
    HPrimeElement vartheta_half_minus() const { return HPrimeElement{sqrt_theta_neg}; }
};

// Nonnegative operator together with its square root.
struct OperatorFactorization {
    LinearOperator op;
    LinearOperator root;

    static OperatorFactorization identity() {
        return {LinearOperator::identity(), LinearOperator::identity()};
    }
    static OperatorFactorization zero() {
        return {LinearOperator::zero(), LinearOperator::zero()};
    }
    static OperatorFactorization multiplication(const ParametricFunction& symbol) {
        return {LinearOperator::multiplication(symbol),
                LinearOperator::multiplication(ParametricFunction::sqrt_positive_part(symbol))};
    }
};

// The pair (A_1, A_2) weighting the two path arguments of a functional.
struct OperatorPair {
    OperatorFactorization a1;
    OperatorFactorization a2;

    // (A+, A-) from a theta operator
    static OperatorPair from_theta(const ThetaOperator& th) {
        return {{th.plus(), th.sqrt_plus()}, {th.minus(), th.sqrt_minus()}};
    }
    static OperatorPair identity_zero() {
        return {OperatorFactorization::identity(), OperatorFactorization::zero()};
    }

    const OperatorFactorization& at(int j) const { return j == 0 ? a1 : a2; }
};

} // namespace gbfi
