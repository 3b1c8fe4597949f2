#include "gbfi/operators.hpp"

#include <cmath>

namespace gbfi {

double LinearOperator::operator_norm(const FunctionSpace& space) const {
    if (symbol_.is_zero())
        return 0.0;
    double sup = 0.0;
    for (int j = 0; j < space.cells(); ++j)
        sup = std::max(sup, std::abs(symbol_.value(space.mid(j))));
    return sup;
}

double bilinear_form(const LinearOperator& op, const HPrimeElement& w, const HPrimeElement& g,
                     const FunctionSpace& space) {
    if (op.is_zero() || w.density.is_zero() || g.density.is_zero())
        return 0.0;
    double acc = 0.0;
    for (int j = 0; j < space.cells(); ++j) {
        double m = space.mid(j);
        acc += op.symbol().value(m) * w.density.value(m) * g.density.value(m) * space.db(j);
    }
    if (!std::isfinite(acc))
        throw NonFinite("operator pairing quadrature is not finite");
    return acc;
}

ThetaOperator ThetaOperator::from_element(HPrimeElement vt) {
    ThetaOperator out{std::move(vt),
                      ParametricFunction::zero(),
                      ParametricFunction::zero(),
                      ParametricFunction::zero(),
                      ParametricFunction::zero(),
                      ParametricFunction::zero()};
    out.theta = out.vartheta.density;
    out.theta_pos = ParametricFunction::positive_part(out.theta);
    out.theta_neg = ParametricFunction::negative_part(out.theta);
    out.sqrt_theta_pos = ParametricFunction::sqrt_positive_part(out.theta);
    out.sqrt_theta_neg = ParametricFunction::sqrt_negative_part(out.theta);
    return out;
}

} // namespace gbfi
