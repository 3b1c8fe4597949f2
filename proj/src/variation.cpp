#include "gbfi/variation.hpp"

#include <cmath>

namespace gbfi {

IdentityReport make_identity_report(std::string name, Complex lhs, Complex rhs,
                                    double tolerance) {
    IdentityReport report;
    report.name = std::move(name);
    report.lhs = lhs;
    report.rhs = rhs;
    report.tolerance = tolerance;
    report.abs_err = std::abs(lhs - rhs);
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    report.rel_err = scale > 0.0 ? report.abs_err / scale : 0.0;
    if (std::abs(lhs) < 1e-14)
        report.pass = report.abs_err <= tolerance;
    else
        report.pass = report.rel_err <= tolerance;
    if (!std::isfinite(report.abs_err))
        report.pass = false;
    return report;
}

Complex first_variation_closed(const DiscreteMeasure& f, const OperatorPair& ops,
                               const DirectionPair& dirs, const SamplePath& x1,
                               const SamplePath& x2, const FunctionSpace& space) {
    Complex acc(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        HPrimeElement v1 = ops.a1.root.apply(atom.element);
        HPrimeElement v2 = ops.a2.root.apply(atom.element);
        double slope = space.inner(v1, dirs.g1) + space.inner(v2, dirs.g2);
        double phase = space.pwz(v1, x1) + space.pwz(v2, x2);
        acc += atom.weight * Complex(0.0, slope) * std::exp(Complex(0.0, phase));
    }
    return acc;
}

namespace {

SamplePath shifted(const SamplePath& x, const std::vector<double>& bump, double h) {
    SamplePath out{x.grid, x.values};
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] += h * bump[j];
    return out;
}

} // namespace

Complex first_variation_numeric(const DiscreteMeasure& f, const OperatorPair& ops,
                                const DirectionPair& dirs, const SamplePath& x1,
                                const SamplePath& x2, const FunctionSpace& space, double h) {
    if (!(h > 0.0))
        throw InvalidParameter("difference step h must be positive");
    std::vector<double> bump1 = space.element_nodes(dirs.g1);
    std::vector<double> bump2 = space.element_nodes(dirs.g2);
    Complex plus = eval_fresnel(f, ops, shifted(x1, bump1, h), x2, space) +
                   eval_fresnel(f, ops, x1, shifted(x2, bump2, h), space);
    Complex minus = eval_fresnel(f, ops, shifted(x1, bump1, -h), x2, space) +
                    eval_fresnel(f, ops, x1, shifted(x2, bump2, -h), space);
    return (plus - minus) / (2.0 * h);
}

Complex feynman_of_variation(const DiscreteMeasure& f, const OperatorPair& ops,
                             const DirectionPair& dirs, const FeynmanParams& params,
                             const FunctionSpace& space) {
    validate_params(params);
    Complex acc(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        double slope = space.inner(ops.a1.root.apply(atom.element), dirs.g1) +
                       space.inner(ops.a2.root.apply(atom.element), dirs.g2);
        acc += atom.weight * Complex(0.0, slope) * psi(params, ops, atom.element, space);
    }
    return acc;
}

Complex feynman_linear_weighted(const DiscreteMeasure& f, const OperatorPair& ops,
                                const DirectionPair& dirs, const FeynmanParams& params,
                                const FunctionSpace& space) {
    validate_params(params);
    const HPrimeElement* gs[2] = {&dirs.g1, &dirs.g2};
    double mean_pair[2] = {space.pair_with_mean(dirs.g1), space.pair_with_mean(dirs.g2)};
    Complex acc(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        Complex weight(0.0, 0.0);
        for (int j = 0; j < 2; ++j) {
            double q = params.at(j);
            Complex inv_root = 1.0 / sqrt_neg_iq(q);
            double cross = space.inner(ops.at(j).root.apply(atom.element), *gs[j]);
            weight += q * inv_root * (mean_pair[j] + Complex(0.0, 1.0) * inv_root * cross);
        }
        acc += atom.weight * weight * psi(params, ops, atom.element, space);
    }
    return acc;
}

IdentityReport verify_cs_feynman(const DiscreteMeasure& f, const OperatorPair& ops,
                                 const DirectionPair& dirs, const FeynmanParams& params,
                                 const FunctionSpace& space, double tolerance) {
    Complex lhs = feynman_of_variation(f, ops, dirs, params, space);
    Complex mean_term = sqrt_neg_iq(params.q1) * space.pair_with_mean(dirs.g1) +
                        sqrt_neg_iq(params.q2) * space.pair_with_mean(dirs.g2);
    Complex rhs = Complex(0.0, -1.0) * feynman_linear_weighted(f, ops, dirs, params, space) -
                  mean_term * feynman_integral(f, ops, params, space);
    return make_identity_report("cs-feynman", lhs, rhs, tolerance);
}

IdentityReport verify_final_display(const DiscreteMeasure& f, const ThetaOperator& theta,
                                    const HPrimeElement& g, const FunctionSpace& space,
                                    double tolerance) {
    const FeynmanParams params{1.0, -1.0};
    const OperatorPair ops = OperatorPair::from_theta(theta);
    DirectionPair dirs{ops.a1.root.apply(g),
                       HPrimeElement{ParametricFunction::scaled(-1.0, ops.a2.root.apply(g).density)}};
    Complex lhs = feynman_linear_weighted(f, ops, dirs, params, space);

    const HPrimeElement& a = space.mean_element();
    double pair_plus = space.inner(g, odot(theta.vartheta_half_plus(), a));
    double pair_minus = space.inner(g, odot(theta.vartheta_half_minus(), a));
    Complex prefactor =
        Complex(0.0, 1.0) * (sqrt_neg_iq(1.0) * pair_plus - sqrt_neg_iq(-1.0) * pair_minus);
    Complex rhs = prefactor * feynman_integral(f, ops, params, space);
    LinearOperator full = theta.full();
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        rhs -= atom.weight * bilinear_form(full, atom.element, g, space) *
               psi(params, ops, atom.element, space);
    }
    return make_identity_report("final-display", lhs, rhs, tolerance);
}

IdentityReport step2_explicit(const DiscreteMeasure& f, const HPrimeElement& g,
                              const FunctionSpace& space, int which, double tolerance) {
    if (which != 1 && which != 2)
        throw InvalidParameter("step2_explicit selects display 1 or 2");
    const double sign = which == 1 ? 1.0 : -1.0; // theta = sign * 1
    ThetaOperator theta =
        ThetaOperator::from_element(HPrimeElement{ParametricFunction::constant(sign)});
    IdentityReport general = verify_final_display(f, theta, g, space, tolerance);

    // hard-coded display: atoms live on x1 for theta = 1 and on x2 for
    // theta = -1, with exponent factor E_k and q = sign on the active space
    const HPrimeElement& a = space.mean_element();
    double ga = space.inner(g, a);
    Complex root = sqrt_neg_iq(sign); // (-i)^{1/2} or (i)^{1/2}
    Complex acc_lin(0.0, 0.0), acc_plain(0.0, 0.0);
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        double norm_sq = space.norm_sq(atom.element);
        double wa = space.pair_with_mean(atom.element);
        Complex exponent = Complex(0.0, -sign * 0.5) * norm_sq + Complex(0.0, 1.0) / root * wa;
        Complex ek = std::exp(exponent);
        acc_plain += atom.weight * ek;
        acc_lin += atom.weight * space.inner(atom.element, g) * ek;
    }
    Complex rhs = sign * Complex(0.0, 1.0) * root * ga * acc_plain - sign * acc_lin;

    IdentityReport report = make_identity_report(which == 1 ? "step2-formula1" : "step2-formula2",
                                                 general.lhs, rhs, tolerance);
    // the specialized rhs must agree with the general evaluation pipeline
    double cross = std::abs(rhs - general.rhs);
    double scale = std::max(std::abs(rhs), std::abs(general.rhs));
    double cross_rel = scale > 0.0 ? cross / scale : 0.0;
    report.details["cross_rel_err"] = cross_rel;
    if (cross_rel > 1e-12 && cross > 1e-12)
        report.pass = false;
    return report;
}

} // namespace gbfi
