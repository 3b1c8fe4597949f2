// Monte-Carlo engine and the statistical verifiers. Determinism contracts
// are bitwise; distributional checks run at reduced N with the 4-sigma
// windows the verifiers themselves report. Every statistical case uses a
// pinned seed, so a pass here is reproducible, not probabilistic.

#include "doctest.h"
#include "test_helpers.hpp"

#include <limits>
#include <random>

using namespace gbfi;
using namespace gbfi_test;

namespace {

BatchOptions opts(std::size_t n, std::uint64_t seed, int threads = 1) {
    BatchOptions o;
    o.n_paths = n;
    o.seed = seed;
    o.threads = threads;
    return o;
}

} // namespace

TEST_CASE("batch reduction is independent of the thread count") {
    FunctionSpace space = standard_space(64);
    HPrimeElement w = element(ParametricFunction::polynomial({0.3, 1.0}));
    std::vector<double> table = space.density_mid(w);

    auto run = [&](int threads) {
        return run_pair_batch(space, opts(5000, 424242u, threads), 2, true,
                              [&](std::size_t, const SamplePath& x1, const SamplePath& x2,
                                  Complex* slots) {
                                  slots[0] = std::exp(Complex(0.0, space.pwz_table(table, x1)));
                                  slots[1] = Complex(space.pwz_table(table, x2), 0.0);
                              });
    };

    std::vector<SlotStats> one = run(1);
    for (int threads : {2, 8}) {
        std::vector<SlotStats> many = run(threads);
        REQUIRE(many.size() == one.size());
        for (std::size_t s = 0; s < one.size(); ++s) {
            CHECK(many[s].mean == one[s].mean);
            CHECK(many[s].var_re == one[s].var_re);
            CHECK(many[s].var_im == one[s].var_im);
        }
    }

    CHECK_THROWS_AS(run_pair_batch(space, opts(0, 1u), 1, false,
                                   [](std::size_t, const SamplePath&, const SamplePath&,
                                      Complex*) {}),
                    InvalidParameter);
}

TEST_CASE("expectation of simple functionals") {
    SUBCASE("constant functional has zero spread") {
        FunctionSpace space = standard_space(64);
        McEstimate est = mc_expectation(space, opts(2000, 5u), false,
                                        [](std::size_t, const SamplePath&, const SamplePath&) {
                                            return Complex(1.0, 0.0);
                                        });
        CHECK(est.mean == Complex(1.0, 0.0));
        CHECK(est.stderr_re == 0.0);
        CHECK(est.stderr_im == 0.0);
    }

    SUBCASE("unimodular atom estimates the Gaussian characteristic value") {
        FunctionSpace space = standard_space(128);
        HPrimeElement w = element(ParametricFunction::constant(1.0)); // ||w||^2 = 1
        std::vector<double> table = space.density_mid(w);
        McEstimate est = mc_expectation(space, opts(20000, 11u), false,
                                        [&](std::size_t, const SamplePath& x1, const SamplePath&) {
                                            return std::exp(Complex(0.0, space.pwz_table(table, x1)));
                                        });
        CHECK(std::abs(est.mean.real() - std::exp(-0.5)) <= 4.0 * est.stderr_re);
        CHECK(std::abs(est.mean.imag()) <= 4.0 * est.stderr_im);
    }

    SUBCASE("linear statistic centers on the drift pairing") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(1.0), ParametricFunction::linear(1.0), 128);
        HPrimeElement w = element(ParametricFunction::constant(1.0));
        std::vector<double> table = space.density_mid(w);
        McEstimate est = mc_expectation(space, opts(20000, 13u), false,
                                        [&](std::size_t, const SamplePath& x1, const SamplePath&) {
                                            return Complex(space.pwz_table(table, x1), 0.0);
                                        });
        CHECK(std::abs(est.mean.real() - 1.0) <= 4.0 * est.stderr_re);
    }

    SUBCASE("standard error shrinks like sqrt(2) when N doubles") {
        FunctionSpace space = standard_space(64);
        HPrimeElement w = element(ParametricFunction::linear(1.0));
        std::vector<double> table = space.density_mid(w);
        auto run = [&](std::size_t n) {
            return mc_expectation(space, opts(n, 17u), false,
                                  [&](std::size_t, const SamplePath& x1, const SamplePath&) {
                                      return Complex(space.pwz_table(table, x1), 0.0);
                                  });
        };
        double ratio = run(8000).stderr_re / run(16000).stderr_re;
        CHECK(ratio > std::sqrt(2.0) * 0.9);
        CHECK(ratio < std::sqrt(2.0) * 1.1);
    }
}

TEST_CASE("law of the stochastic pairing") {
    SUBCASE("driftless unit element is standard normal") {
        FunctionSpace space = standard_space(128);
        StatReport rep = verify_pwz_law(element(ParametricFunction::constant(1.0)), space,
                                        opts(20000, 19u), 4.0);
        CHECK(rep.pass);
        CHECK(rep.reference == Complex(0.0, 1.0)); // mean 0, variance 1 up to quadrature
    }

    SUBCASE("drift shifts the mean to (w, a)") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(1.0), ParametricFunction::linear(1.0), 128);
        StatReport rep = verify_pwz_law(element(ParametricFunction::constant(1.0)), space,
                                        opts(20000, 23u), 4.0);
        CHECK(rep.pass);
        CHECK(rep.estimate.mean.real() == doctest::Approx(1.0).epsilon(0.05));
    }

    SUBCASE("zero element produces exactly zero samples") {
        FunctionSpace space = standard_space(64);
        StatReport rep = verify_pwz_law(element(ParametricFunction::zero()), space,
                                        opts(500, 29u), 4.0);
        CHECK(rep.pass);
        CHECK(rep.z == 0.0);
        CHECK(rep.estimate.mean == Complex(0.0, 0.0));
    }
}

TEST_CASE("translation identity") {
    std::mt19937_64 rng(83);
    OperatorPair id_zero = OperatorPair::identity_zero();

    SUBCASE("zero shift is pathwise exact") {
        FunctionSpace space = standard_space(64);
        DiscreteMeasure f = single_atom(Complex(1.0, 0.0), element(random_poly(rng)));
        VerifierResult res = verify_translation(f, id_zero, element(ParametricFunction::zero()),
                                                space, opts(2000, 31u), 4.0, 1e-12);
        CHECK(res.stat.pass);
        CHECK(res.stat.z == 0.0);
        CHECK(res.stat.estimate.stderr_re == 0.0);
        CHECK(res.closed_form.pass);
    }

    SUBCASE("constant functional with a real shift") {
        FunctionSpace space = standard_space(64);
        VerifierResult res = verify_translation(delta_at_zero(), id_zero,
                                                element(ParametricFunction::constant(0.5)),
                                                space, opts(20000, 37u), 4.0, 1e-9);
        CHECK(res.stat.pass);
        CHECK(res.closed_form.pass);
        CHECK(res.closed_form.lhs == Complex(1.0, 0.0));
    }

    SUBCASE("oscillatory atom with drift, common random numbers") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(0.5), ParametricFunction::linear(1.0), 128);
        DiscreteMeasure f;
        f.atoms.push_back({Complex(0.5, 0.25), element(random_poly(rng))});
        f.atoms.push_back({Complex(0.25, -0.1), element(random_poly(rng))});
        VerifierResult res = verify_translation(f, id_zero, element(random_poly(rng)), space,
                                                opts(20000, 41u), 4.0, 1e-12);
        CHECK(res.stat.pass);
        CHECK(res.closed_form.pass);
    }
}

TEST_CASE("integration by parts, plain and scaled") {
    std::mt19937_64 rng(89);

    SUBCASE("point mass with zero directions consumes no statistical slack") {
        FunctionSpace space = standard_space(64);
        DirectionPair dirs{element(ParametricFunction::zero()),
                           element(ParametricFunction::zero())};
        VerifierResult res = verify_parts_basic(delta_at_zero(), OperatorPair::identity_zero(),
                                                dirs, space, opts(1000, 43u), 4.0, 1e-12);
        CHECK(res.stat.pass);
        CHECK(res.stat.z == 0.0);
        CHECK(res.closed_form.pass);
    }

    SUBCASE("multi-atom profile operator at N = 20000") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(0.25), ParametricFunction::linear(1.0), 128);
        ThetaOperator th = ThetaOperator::from_element(element(random_poly(rng)));
        DiscreteMeasure f;
        f.atoms.push_back({Complex(0.5, 0.25), element(random_poly(rng))});
        f.atoms.push_back({Complex(-0.2, 0.4), element(random_poly(rng))});
        f.atoms.push_back({Complex(0.1, 0.1), element(random_poly(rng))});
        DirectionPair dirs{element(random_poly(rng)), element(random_poly(rng))};

        VerifierResult basic = verify_parts_basic(f, OperatorPair::from_theta(th), dirs, space,
                                                  opts(20000, 47u), 4.0, 1e-9);
        CHECK(basic.stat.pass);
        CHECK(basic.stat.name == "parts");
        CHECK(basic.closed_form.pass);

        VerifierResult scaled = verify_parts_scaled(f, OperatorPair::from_theta(th), dirs, 2.0,
                                                    0.5, space, opts(20000, 47u), 4.0, 1e-9);
        CHECK(scaled.stat.pass);
        CHECK(scaled.stat.name == "parts-scaled");
        CHECK(scaled.closed_form.pass);
    }

    SUBCASE("unit scaling coincides with the plain identity") {
        FunctionSpace space = standard_space(64);
        DiscreteMeasure f = single_atom(Complex(0.9, -0.3), element(random_poly(rng)));
        DirectionPair dirs{element(random_poly(rng)), element(random_poly(rng))};
        VerifierResult a = verify_parts_basic(f, OperatorPair::identity_zero(), dirs, space,
                                              opts(2000, 53u), 4.0, 1e-9);
        VerifierResult b = verify_parts_scaled(f, OperatorPair::identity_zero(), dirs, 1.0, 1.0,
                                               space, opts(2000, 53u), 4.0, 1e-9);
        CHECK(a.stat.name == b.stat.name);
        CHECK(a.stat.estimate.mean == b.stat.estimate.mean);
        CHECK(a.closed_form.lhs == b.closed_form.lhs);
        CHECK_THROWS_AS(verify_parts_scaled(f, OperatorPair::identity_zero(), dirs,
                                            std::numeric_limits<double>::infinity(), 1.0, space,
                                            opts(100, 1u), 4.0, 1e-9),
                        InvalidParameter);
    }
}

TEST_CASE("analytic continuation bridge") {
    std::mt19937_64 rng(97);
    const std::vector<std::pair<double, double>> lambdas{{1.0, 1.0}, {2.0, 2.0}, {4.0, 4.0}};

    SUBCASE("point mass: J is exactly 1 at every scale") {
        FunctionSpace space = standard_space(64);
        ContinuationResult res =
            verify_continuation(delta_at_zero(), OperatorPair::identity_zero(),
                                FeynmanParams{1.0, -1.0}, lambdas, space, opts(500, 59u), 4.0);
        REQUIRE(res.lambda_checks.size() == 3);
        for (const StatReport& rep : res.lambda_checks) {
            CHECK(rep.pass);
            CHECK(rep.z == 0.0);
            CHECK(rep.estimate.mean == Complex(1.0, 0.0));
        }
        CHECK(res.ray_check.pass);
    }

    SUBCASE("unit atom at lambda = (1, 1) sits at exp(-1/2)") {
        FunctionSpace space = standard_space(512);
        DiscreteMeasure f =
            single_atom(Complex(1.0, 0.0), element(ParametricFunction::constant(1.0)));
        ContinuationResult res =
            verify_continuation(f, OperatorPair::identity_zero(), FeynmanParams{1.0, -1.0},
                                {{1.0, 1.0}}, space, opts(20000, 61u), 4.0);
        REQUIRE(res.lambda_checks.size() == 1);
        CHECK(res.lambda_checks[0].pass);
        CHECK(res.lambda_checks[0].reference.real() ==
              doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
        CHECK(res.ray_check.pass);
    }

    SUBCASE("profile operator and drift at three scales") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(0.5), ParametricFunction::linear(1.0), 128);
        ThetaOperator th = ThetaOperator::from_element(element(random_poly(rng)));
        DiscreteMeasure f;
        f.atoms.push_back({Complex(0.7, 0.0), element(random_poly(rng))});
        f.atoms.push_back({Complex(0.0, -0.4), element(random_poly(rng))});
        ContinuationResult res =
            verify_continuation(f, OperatorPair::from_theta(th), FeynmanParams{2.0, 3.0},
                                lambdas, space, opts(20000, 67u), 4.0);
        for (const StatReport& rep : res.lambda_checks)
            CHECK(rep.pass);
        CHECK(res.ray_check.pass);
        CHECK(res.ray_check.tolerance == 1e-12);
        CHECK_THROWS_AS(verify_continuation(f, OperatorPair::from_theta(th),
                                            FeynmanParams{2.0, 3.0}, {{-1.0, 1.0}}, space,
                                            opts(100, 1u), 4.0),
                        InvalidParameter);
    }
}
