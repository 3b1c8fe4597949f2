// Directional derivatives of the Fresnel functional and the closed-form
// integration-by-parts identities, including the specialization chain of the
// main display. The central difference of eval_fresnel is the independent
// oracle for the closed variation.

#include "doctest.h"
#include "test_helpers.hpp"

#include <numbers>
#include <random>

using namespace gbfi;
using namespace gbfi_test;

namespace {

ThetaOperator theta_from_poly(std::mt19937_64& rng) {
    return ThetaOperator::from_element(element(random_poly(rng)));
}

DirectionPair zero_dirs() {
    return DirectionPair{element(ParametricFunction::zero()),
                         element(ParametricFunction::zero())};
}

} // namespace

TEST_CASE("closed first variation") {
    FunctionSpace space = standard_space(256);
    SamplePath x1 = wiggle_path(space, 1.0);
    SamplePath x2 = wiggle_path(space, 0.7);
    OperatorPair id_zero = OperatorPair::identity_zero();
    std::mt19937_64 rng(61);
    DiscreteMeasure f;
    f.atoms.push_back({Complex(0.4, -0.2), element(random_poly(rng))});
    f.atoms.push_back({Complex(-0.3, 0.5), element(random_poly(rng))});
    DirectionPair dirs{element(random_poly(rng)), element(random_poly(rng))};

    SUBCASE("zero directions and point masses vanish") {
        CHECK(first_variation_closed(f, id_zero, zero_dirs(), x1, x2, space) == Complex(0.0, 0.0));
        CHECK(first_variation_closed(delta_at_zero(), id_zero, dirs, x1, x2, space) ==
              Complex(0.0, 0.0));
    }

    SUBCASE("linear in the direction pair") {
        Complex base = first_variation_closed(f, id_zero, dirs, x1, x2, space);
        DirectionPair doubled{element(ParametricFunction::scaled(2.0, dirs.g1.density)),
                              element(ParametricFunction::scaled(2.0, dirs.g2.density))};
        CHECK(first_variation_closed(f, id_zero, doubled, x1, x2, space) == 2.0 * base);
    }

    SUBCASE("central difference converges at second order") {
        ThetaOperator th = theta_from_poly(rng);
        OperatorPair ops = OperatorPair::from_theta(th);
        Complex closed = first_variation_closed(f, ops, dirs, x1, x2, space);
        double gap_h = std::abs(closed -
                                first_variation_numeric(f, ops, dirs, x1, x2, space, 1e-2));
        double gap_half = std::abs(closed -
                                   first_variation_numeric(f, ops, dirs, x1, x2, space, 5e-3));
        REQUIRE(gap_h > 1e-13); // the comparison must not be vacuous
        double ratio = gap_h / gap_half;
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }

    SUBCASE("numeric variation of the constant functional is exactly zero") {
        CHECK(first_variation_numeric(delta_at_zero(), id_zero, dirs, x1, x2, space, 1e-3) ==
              Complex(0.0, 0.0));
        CHECK_THROWS_AS(first_variation_numeric(f, id_zero, dirs, x1, x2, space, 0.0),
                        InvalidParameter);
    }

    SUBCASE("phase-linear atoms make the difference quotient step-insensitive") {
        DiscreteMeasure one_atom = single_atom(Complex(1.0, 0.0),
                                               element(ParametricFunction::constant(0.9)));
        Complex coarse = first_variation_numeric(one_atom, id_zero, dirs, x1, x2, space, 1e-2);
        Complex fine = first_variation_numeric(one_atom, id_zero, dirs, x1, x2, space, 1e-3);
        CHECK(std::abs(coarse - fine) <= 1e-4);
    }
}

TEST_CASE("integrals of the variation and of the linear weight") {
    FunctionSpace space = standard_space(512);
    OperatorPair id_zero = OperatorPair::identity_zero();
    FeynmanParams q{1.0, -1.0};
    HPrimeElement unit = element(ParametricFunction::constant(1.0));
    DirectionPair unit_dirs{unit, element(ParametricFunction::zero())};

    SUBCASE("zero direction or point mass integrate to zero") {
        std::mt19937_64 rng(67);
        DiscreteMeasure f = single_atom(Complex(0.7, 0.1), element(random_poly(rng)));
        CHECK(feynman_of_variation(f, id_zero, zero_dirs(), q, space) == Complex(0.0, 0.0));
        CHECK(feynman_of_variation(delta_at_zero(), id_zero, unit_dirs, q, space) ==
              Complex(0.0, 0.0));
        CHECK(feynman_linear_weighted(f, id_zero, zero_dirs(), q, space) == Complex(0.0, 0.0));
        CHECK(feynman_linear_weighted(delta_at_zero(), id_zero, unit_dirs, q, space) ==
              Complex(0.0, 0.0)); // driftless space
    }

    SUBCASE("unit atom: i exp(-i/2) from the scalar substitution") {
        Complex v = feynman_of_variation(single_atom(Complex(1.0, 0.0), unit), id_zero,
                                         unit_dirs, q, space);
        Complex ref = Complex(0.0, 1.0) * Complex(std::cos(0.5), -std::sin(0.5));
        CHECK(std::abs(v - ref) <= 1e-12);
    }
}

TEST_CASE("integration-by-parts identity in closed form") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);

    SUBCASE("point mass balances to zero even with drift") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(1.0), ParametricFunction::linear(1.0), 256);
        DirectionPair dirs{element(random_poly(rng)), element(random_poly(rng))};
        IdentityReport rep = verify_cs_feynman(delta_at_zero(), OperatorPair::identity_zero(),
                                               dirs, FeynmanParams{1.0, -1.0}, space, 1e-12);
        CHECK(rep.pass);
        CHECK(std::abs(rep.lhs) == 0.0);
    }

    SUBCASE("driftless single atom balances at 1e-12") {
        FunctionSpace space = standard_space(512);
        ThetaOperator th = theta_from_poly(rng);
        DiscreteMeasure f = single_atom(Complex(0.8, -0.6), element(random_poly(rng)));
        DirectionPair dirs{element(random_poly(rng)), element(random_poly(rng))};
        IdentityReport rep = verify_cs_feynman(f, OperatorPair::from_theta(th), dirs,
                                               FeynmanParams{2.0, 3.0}, space, 1e-12);
        CHECK(rep.pass);
    }

    SUBCASE("random multi-atom configurations balance at 1e-9") {
        for (int round = 0; round < 5; ++round) {
            FunctionSpace space = make_space(
                round % 3 == 0 ? ParametricFunction::zero() : ParametricFunction::linear(0.4),
                round % 2 == 0 ? ParametricFunction::linear(1.0)
                               : ParametricFunction::polynomial({0.0, 1.0, 0.5}),
                512);
            ThetaOperator th = theta_from_poly(rng);
            DiscreteMeasure f;
            int n_atoms = 1 + static_cast<int>(rng() % 4);
            for (int k = 0; k < n_atoms; ++k)
                f.atoms.push_back({Complex(coeff(rng), coeff(rng)), element(random_poly(rng))});
            DirectionPair dirs{element(random_poly(rng)), element(random_poly(rng))};
            FeynmanParams q = round % 2 == 0 ? FeynmanParams{1.0, -1.0} : FeynmanParams{-1.0, 5.0};
            IdentityReport rep =
                verify_cs_feynman(f, OperatorPair::from_theta(th), dirs, q, space, 1e-9);
            CHECK(rep.pass);
            CHECK(rep.rel_err <= 1e-9);
        }
    }
}

TEST_CASE("split-root pairing identity per atom") {
    FunctionSpace space = standard_space(512);
    std::mt19937_64 rng(73);
    for (int round = 0; round < 5; ++round) {
        ThetaOperator th = theta_from_poly(rng);
        HPrimeElement w = element(random_poly(rng));
        HPrimeElement g = element(random_poly(rng));
        double plus = space.inner(th.sqrt_plus().apply(w), th.sqrt_plus().apply(g));
        double minus = space.inner(th.sqrt_minus().apply(w), th.sqrt_minus().apply(g));
        double direct = bilinear_form(th.full(), w, g, space);
        CHECK(plus - minus ==
              doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("main display and its hard-coded specializations") {
    std::mt19937_64 rng(79);

    SUBCASE("constant profiles reduce to the two explicit formulas") {
        FunctionSpace space =
            make_space(ParametricFunction::polynomial({0.0, 0.0, 0.5}),
                       ParametricFunction::linear(1.0), 512);
        DiscreteMeasure f;
        f.atoms.push_back({Complex(0.5, 0.25), element(random_poly(rng))});
        f.atoms.push_back({Complex(0.25, -0.1), element(random_poly(rng))});
        HPrimeElement g = element(ParametricFunction::constant(0.7));

        for (int which : {1, 2}) {
            double sign = which == 1 ? 1.0 : -1.0;
            ThetaOperator th =
                ThetaOperator::from_element(element(ParametricFunction::constant(sign)));
            IdentityReport general = verify_final_display(f, th, g, space, 1e-9);
            IdentityReport special = step2_explicit(f, g, space, which, 1e-9);
            CHECK(general.pass);
            CHECK(special.pass);
            CHECK(special.details.at("cross_rel_err") <= 1e-12);
            CHECK(std::abs(special.lhs - general.lhs) <= 1e-15);
        }
        CHECK_THROWS_AS(step2_explicit(f, g, space, 3, 1e-9), InvalidParameter);
    }

    SUBCASE("point mass: both explicit formulas collapse to the drift terms") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(0.3), ParametricFunction::linear(1.0), 128);
        HPrimeElement g = element(ParametricFunction::constant(1.0));
        for (int which : {1, 2}) {
            IdentityReport rep = step2_explicit(delta_at_zero(), g, space, which, 1e-12);
            CHECK(rep.pass);
        }
    }

    SUBCASE("driftless formula one agrees with the general path at 1e-12") {
        FunctionSpace space = standard_space(512);
        DiscreteMeasure f = single_atom(Complex(1.0, -0.5), element(random_poly(rng)));
        HPrimeElement g = element(random_poly(rng));
        IdentityReport rep = step2_explicit(f, g, space, 1, 1e-12);
        CHECK(rep.pass);
        CHECK(rep.details.at("cross_rel_err") <= 1e-12);
    }

    SUBCASE("half-period sine profile passes at 1e-9") {
        FunctionSpace space =
            make_space(ParametricFunction::polynomial({0.0, 0.0, 0.5}),
                       ParametricFunction::polynomial({0.0, 1.0, 0.5}), 512);
        ParametricFunction shape = ParametricFunction::scaled_sine_b_ratio(
            1.0, std::numbers::pi, space.pair().b, space.horizon());
        ThetaOperator th = ThetaOperator::from_element(
            element(ParametricFunction::density_of(shape, space.pair().b)));
        DiscreteMeasure f;
        f.atoms.push_back({Complex(0.6, 0.2), element(random_poly(rng))});
        f.atoms.push_back({Complex(-0.3, 0.45), element(random_poly(rng))});
        HPrimeElement g = element(ParametricFunction::linear(0.9));
        IdentityReport rep = verify_final_display(f, th, g, space, 1e-9);
        CHECK(rep.pass);
        CHECK(rep.rel_err <= 1e-9);
    }
}
