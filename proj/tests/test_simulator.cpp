// Path samplers, the eigenbasis of the covariance kernel, and the covariance
// operator B. Statistical checks run at small N with 4-standard-error
// windows; structural checks (determinism, closed forms at the nodes) are
// exact or at quadrature tolerance.

#include "doctest.h"
#include "test_helpers.hpp"

#include <numbers>

using namespace gbfi;
using namespace gbfi_test;

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    std::size_t n = 0;

    double se_mean() const { return std::sqrt(var / static_cast<double>(n)); }
    double se_var() const { return var * std::sqrt(2.0 / (static_cast<double>(n) - 1.0)); }
};

template <typename Sampler>
Moments end_moments(Sampler&& draw, std::size_t n, int node) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = draw(i).values[static_cast<std::size_t>(node)];
        sum += v;
        sq += v * v;
    }
    Moments m;
    m.n = n;
    m.mean = sum / static_cast<double>(n);
    m.var = (sq - static_cast<double>(n) * m.mean * m.mean) / (static_cast<double>(n) - 1.0);
    return m;
}

} // namespace

TEST_CASE("increment sampler matches the Gaussian marginals at T") {
    const std::size_t n_paths = 30000;

    SUBCASE("driftless unit clock: x(T) ~ N(0, 1)") {
        FunctionSpace space = standard_space(64);
        Moments m = end_moments(
            [&](std::size_t i) { return sample_path_increments(space, {2026u, i}); }, n_paths,
            space.cells());
        CHECK(std::abs(m.mean - 0.0) <= 4.0 * m.se_mean());
        CHECK(std::abs(m.var - 1.0) <= 4.0 * m.se_var());
    }

    SUBCASE("linear mean shifts x(T) to a(T)") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(1.0), ParametricFunction::linear(1.0), 64);
        Moments m = end_moments(
            [&](std::size_t i) { return sample_path_increments(space, {7u, i}); }, n_paths,
            space.cells());
        CHECK(std::abs(m.mean - 1.0) <= 4.0 * m.se_mean());
    }
}

TEST_CASE("samplers are deterministic in (seed, stream)") {
    FunctionSpace space = standard_space(128);
    SamplePath x1 = sample_path_increments(space, {99u, 5u});
    SamplePath x2 = sample_path_increments(space, {99u, 5u});
    CHECK(x1.values == x2.values);
    SamplePath y1 = sample_path_series(space, {99u, 5u}, 64);
    SamplePath y2 = sample_path_series(space, {99u, 5u}, 64);
    CHECK(y1.values == y2.values);
    CHECK(x1.values != sample_path_increments(space, {99u, 6u}).values);
}

TEST_CASE("series sampler marginals") {
    const std::size_t n_paths = 30000;

    SUBCASE("single mode: Var x(T) = e_1(T)^2 = 8 / pi^2") {
        FunctionSpace space = standard_space(64);
        EigenSystem basis(space, 1);
        Moments m = end_moments(
            [&](std::size_t i) { return sample_path_series(space, basis, {11u, i}); }, n_paths,
            space.cells());
        double ref = 8.0 / (std::numbers::pi * std::numbers::pi);
        CHECK(std::abs(m.var - ref) <= 4.0 * m.se_var());
    }

    SUBCASE("mean function shifts every node") {
        FunctionSpace space =
            make_space(ParametricFunction::linear(1.0), ParametricFunction::linear(1.0), 64);
        EigenSystem basis(space, 64);
        for (int node : {16, 32, 64}) {
            Moments m = end_moments(
                [&](std::size_t i) { return sample_path_series(space, basis, {13u, i}); },
                n_paths, node);
            double t = space.grid().node(node);
            CHECK(std::abs(m.mean - t) <= 4.0 * m.se_mean());
        }
    }

    SUBCASE("two-point covariance approaches min(b(s), b(t))") {
        FunctionSpace space = standard_space(64);
        EigenSystem basis(space, 256);
        const std::size_t n = n_paths;
        const int half = 32, last = 64;
        double su = 0.0, sv = 0.0, suv = 0.0, suu = 0.0, svv = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            SamplePath x = sample_path_series(space, basis, {17u, i});
            double u = x.values[half], v = x.values[last];
            su += u;
            sv += v;
            suv += u * v;
            suu += u * u;
            svv += v * v;
        }
        double dn = static_cast<double>(n);
        double mu = su / dn, mv = sv / dn;
        double cov = (suv - dn * mu * mv) / (dn - 1.0);
        double var_u = (suu - dn * mu * mu) / (dn - 1.0);
        double var_v = (svv - dn * mv * mv) / (dn - 1.0);
        // SE of a Gaussian sample covariance: sqrt((var_u var_v + cov^2)/n)
        double se = std::sqrt((var_u * var_v + cov * cov) / dn);
        CHECK(std::abs(cov - 0.5) <= 4.0 * se);
    }
}

TEST_CASE("eigenbasis closed forms and orthonormality") {
    FunctionSpace space = standard_space(4096);
    EigenSystem basis(space, 8);

    SUBCASE("unit norms and orthogonality at n = 4096") {
        for (int m = 1; m <= 8; ++m)
            CHECK(space.norm_sq(basis.eigenfunction(m)) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(std::abs(space.inner(basis.eigenfunction(1), basis.eigenfunction(2))) <= 1e-5);
        CHECK(std::abs(space.inner(basis.eigenfunction(3), basis.eigenfunction(7))) <= 1e-5);
    }

    SUBCASE("first mode endpoint value 2 sqrt(2) / pi") {
        double ref = 2.0 * std::sqrt(2.0) / std::numbers::pi;
        CHECK(basis.basis_nodes(1).back() == doctest::Approx(ref).epsilon(1e-12));
        // cumulative quadrature of the density reproduces the node values
        std::vector<double> nodes = space.element_nodes(basis.eigenfunction(1));
        CHECK(nodes.back() == doctest::Approx(ref).epsilon(1e-5));
    }

    SUBCASE("eigenvalues decay like (b(T)/kappa_m)^2") {
        double kappa1 = 0.5 * std::numbers::pi;
        CHECK(basis.eigenvalue(1) == doctest::Approx(1.0 / (kappa1 * kappa1)).epsilon(1e-12));
        CHECK(eigenvalue(3, space) ==
              doctest::Approx(1.0 / std::pow(2.5 * std::numbers::pi, 2)).epsilon(1e-12));
    }

    SUBCASE("nonlinear clock keeps the basis orthonormal") {
        FunctionSpace curved = make_space(ParametricFunction::zero(),
                                          ParametricFunction::polynomial({0.0, 1.0, 0.5}), 4096);
        EigenSystem cb(curved, 4);
        for (int m = 1; m <= 4; ++m)
            CHECK(curved.norm_sq(cb.eigenfunction(m)) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(std::abs(curved.inner(cb.eigenfunction(1), cb.eigenfunction(4))) <= 1e-5);
    }
}

TEST_CASE("covariance operator B") {
    FunctionSpace space = standard_space(4096);

    SUBCASE("unit density: (w, Bw) = int t^2 dt = 1/3") {
        HPrimeElement w = element(ParametricFunction::constant(1.0));
        HPrimeElement bw = apply_B(w, space);
        double pairing = space.inner(w, bw);
        CHECK(pairing == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
        CHECK(pairing == doctest::Approx(space.integral_sq_values_db(w)).epsilon(1e-12));
    }

    SUBCASE("zero element maps to zero") {
        HPrimeElement bw = apply_B(element(ParametricFunction::zero()), space);
        for (int j = 0; j < space.cells(); j += 97)
            CHECK(bw.density.value(space.mid(j)) == 0.0);
    }

    SUBCASE("eigen-relation B e_m = lambda_m e_m") {
        EigenSystem basis(space, 4);
        for (int m = 1; m <= 4; ++m) {
            HPrimeElement e = basis.eigenfunction(m);
            HPrimeElement residual = combine(1.0, apply_B(e, space), -basis.eigenvalue(m), e);
            CHECK(std::sqrt(space.norm_sq(residual)) <= 1e-4);
        }
    }

    SUBCASE("quadratic identity for random densities") {
        std::mt19937_64 rng(21);
        for (int round = 0; round < 3; ++round) {
            HPrimeElement w = element(random_poly(rng));
            double lhs = space.integral_sq_values_db(w);
            double rhs = space.inner(w, apply_B(w, space));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}
