#include <doctest.h>

#include <cmath>

#include "hyperma/errors.hpp"
#include "hyperma/operators.hpp"
#include "hyperma/subsolution.hpp"

using namespace hyperma;

namespace {

Problem make_problem(std::size_t n, TestFunction phi, RhsFunction f, DomainSpec domain) {
    Problem p;
    p.n = n;
    p.domain = std::move(domain);
    p.phi = std::move(phi);
    p.f = f;
    return p;
}

SubsolutionOptions small_options() {
    SubsolutionOptions o;
    o.interior_samples = 2000;
    o.boundary_samples = 300;
    return o;
}

}  // namespace

TEST_CASE("sample sets") {
    const auto ball = DomainSpec::ball(1, 1.0, {0.5, 0.0, 0.0, 0.0});
    const auto s = sample_domain(ball, 500, 100, 3);
    CHECK(s.interior.size() == 500);
    CHECK(s.boundary.size() == 100);
    const auto r = ball.defining_function();
    for (const auto& x : s.interior) CHECK(r.value(x) < 0.0);
    for (const auto& x : s.boundary) CHECK(std::abs(r.value(x)) < 1e-12);
    const auto again = sample_domain(ball, 500, 100, 3);
    CHECK(again.interior == s.interior);
    CHECK(again.boundary == s.boundary);
    CHECK(sample_domain(ball, 500, 100, 4).interior != s.interior);

    const auto ell = DomainSpec::ellipsoid({1.0, 2.0});
    const auto se = sample_domain(ell, 200, 50, 1);
    for (const auto& x : se.boundary) CHECK(std::abs(ell.defining_function().value(x)) < 1e-12);

    const auto box = DomainSpec::box(1, 0.5);
    const auto sb = sample_domain(box, 200, 50, 1);
    for (const auto& x : sb.interior) CHECK(box.contains(x));
    for (const auto& x : sb.boundary) {
        double m = 0.0;
        for (double c : x) m = std::max(m, std::abs(c));
        CHECK(m == doctest::Approx(0.5));
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(DomainSpec::ball(1, -1.0), PreconditionError);
    CHECK_THROWS_AS(DomainSpec::ellipsoid({1.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(DomainSpec::box(1, 0.0), PreconditionError);
    CHECK_THROWS_AS(DomainSpec::ball(1, 1.0, {0.0, 0.0}), PreconditionError);
}

TEST_CASE("alpha_of examples") {
    const auto s1 = sample_domain(DomainSpec::ball(1), 500, 100);
    CHECK(alpha_of(DomainSpec::ball(1), s1).alpha == doctest::Approx(8.0).epsilon(1e-12));
    const auto ell = DomainSpec::ellipsoid({1.0, 2.0});
    CHECK(alpha_of(ell, sample_domain(ell, 500, 100)).alpha == doctest::Approx(8.0).epsilon(1e-12));
    auto scaled = DomainSpec::ball(1);
    scaled.scale = 2.0;
    CHECK(alpha_of(scaled, s1).alpha == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("extend_boundary_data") {
    const auto ball = DomainSpec::ball(1);
    const auto s = sample_domain(ball, 1000, 200);
    const auto e1 = extend_boundary_data(TestFunction::abs_sq(1), ball, s);
    CHECK(e1.identity);
    CHECK(e1.correction == 0.0);
    const auto e2 = extend_boundary_data(TestFunction::coordinate(1, 0), ball, s);
    CHECK(e2.identity);

    const auto phi = TestFunction::abs_sq(1, -1.0 / 16.0);
    const auto e3 = extend_boundary_data(phi, ball, s);
    CHECK_FALSE(e3.identity);
    CHECK(e3.correction == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    for (const auto& x : s.boundary) CHECK(std::abs(e3.function.value(x) - phi.value(x)) < 1e-12);
    for (const auto& x : s.interior) CHECK(is_psh_at(e3.function, x));

    CHECK_THROWS_AS(extend_boundary_data(phi, DomainSpec::box(1, 0.5), sample_domain(DomainSpec::box(1, 0.5), 50, 10)),
                    ConstructionError);
}

TEST_CASE("rhs_growth_constant examples") {
    const auto s = sample_domain(DomainSpec::ball(2), 300, 50);
    CHECK(rhs_growth_constant(RhsFunction::constant_value(1.0), 0.0, 2, s).constant == doctest::Approx(1.0));
    CHECK(rhs_growth_constant(RhsFunction::grad_power(1.0, 1.0), 0.0, 2, s).constant ==
          doctest::Approx(1.0).epsilon(1e-12));
    const double m = 0.7;
    CHECK(rhs_growth_constant(RhsFunction::exp_u(), m, 2, s).constant == doctest::Approx(std::exp(m)).epsilon(1e-12));
    CHECK_THROWS_AS(rhs_growth_constant(RhsFunction::grad_power(1.0, 1.0, 3.0), 0.0, 2, s), ConstructionError);
    CHECK_THROWS_AS(rhs_growth_constant(RhsFunction::exp_u(1.0, -1.0), 0.0, 2, s), PreconditionError);
}

TEST_CASE("harmonic_extension on balls") {
    const auto ball = DomainSpec::ball(1, 1.5, {0.2, -0.1, 0.0, 0.3});
    const auto s = sample_domain(ball, 200, 200);
    const HyperHermitianMatrix a{{Quaternion{2.0, 0, 0, 0}}};
    const std::vector<TestFunction> data{
        TestFunction::abs_sq(1),
        TestFunction::quadratic_form(a) + TestFunction::coordinate(1, 0, 2),
        TestFunction::radial_pow4(1).shifted(ball.center_point()),
        TestFunction::constant(1, 3.0),
    };
    for (const auto& phi : data) {
        const auto h = harmonic_extension(phi, ball);
        for (const auto& x : s.boundary) CHECK(h.value(x) == doctest::Approx(phi.value(x)).epsilon(1e-12));
        for (const auto& x : s.interior) CHECK(std::abs(h.real_hessian(x).trace()) < 1e-12);
    }
    CHECK_THROWS_AS(harmonic_extension(TestFunction::radial_pow4(1), ball), PreconditionError);
    CHECK_THROWS_AS(harmonic_extension(TestFunction::abs_sq(1), DomainSpec::box(1, 0.5)), PreconditionError);
}

TEST_CASE("build_subsolution and verify on ball(1)") {
    struct Case {
        TestFunction phi;
        RhsFunction f;
    };
    for (std::size_t n : {1u, 2u}) {
        const std::vector<Case> cases{
            {TestFunction::constant(n, 0.0), RhsFunction::constant_value(1.0)},
            {TestFunction::abs_sq(n), RhsFunction::constant_value(std::pow(8.0, double(n)))},
            {TestFunction::abs_sq(n), RhsFunction::abs_sq(24.0)},
            {TestFunction::abs_sq(n, -1.0 / 16.0), RhsFunction::constant_value(1.0)},
            {TestFunction::constant(n, 0.0), RhsFunction::grad_power(1.0, 1.0)},
            {TestFunction::constant(n, 0.5), RhsFunction::exp_u()},
        };
        for (const auto& c : cases) {
            const auto p = make_problem(n, c.phi, c.f, DomainSpec::ball(n));
            const auto rep = build_subsolution(p, small_options());
            CHECK(rep.sub.s > 0.0);
            CHECK(rep.sub.k >= 1.0);
            CHECK(rep.chain_slack >= 0.0);
            CHECK(rep.det_slack >= -1e-9);
            CHECK(rep.c2 == std::pow(2.0, double(n) - 1.0));
            const auto v = verify_subsolution(rep.sub, p, rep.samples);
            CHECK(v.passed);
            CHECK(v.boundary_mismatch <= 1e-9);
            CHECK(v.min_margin >= -1e-9);

            // Doubling s keeps the pair valid.
            Subsolution doubled = rep.sub;
            doubled.s *= 2.0;
            CHECK(verify_subsolution(doubled, p, rep.samples).passed);
        }
    }
}

TEST_CASE("verify_subsolution failure modes") {
    const auto p = make_problem(1, TestFunction::abs_sq(1, 0.1), RhsFunction::constant_value(1.0), DomainSpec::ball(1));
    const auto rep = build_subsolution(p, small_options());

    Subsolution bare = rep.sub;
    bare.s = 0.0;  // phi alone: det = 0.8 < 1
    const auto v0 = verify_subsolution(bare, p, rep.samples);
    CHECK_FALSE(v0.passed);
    CHECK_FALSE(v0.margin_ok);
    CHECK(v0.boundary_ok);
    CHECK(v0.min_margin == doctest::Approx(0.8 - 1.0).epsilon(1e-9));

    Subsolution lifted = rep.sub;
    lifted.phi_ext += TestFunction::constant(1, 0.1);
    const auto v1 = verify_subsolution(lifted, p, rep.samples);
    CHECK_FALSE(v1.boundary_ok);
    CHECK(v1.boundary_mismatch == doctest::Approx(0.1).epsilon(1e-9));
    CHECK_FALSE(v1.passed);
}

TEST_CASE("larger f never gives a smaller s") {
    double last_s = 0.0;
    int last_k = 0;
    for (double c : {0.5, 1.0, 2.0, 8.0, 64.0}) {
        const auto p = make_problem(2, TestFunction::constant(2, 0.0), RhsFunction::constant_value(c), DomainSpec::ball(2));
        const auto rep = build_subsolution(p, small_options());
        const int k = static_cast<int>(rep.sub.k);
        CHECK((k > last_k || (k == last_k && rep.sub.s >= last_s)));
        last_s = rep.sub.s;
        last_k = k;
    }
}

TEST_CASE("on a ball the Hessian bound is exact for phi = 0") {
    for (std::size_t n : {1u, 2u, 3u}) {
        const auto p = make_problem(n, TestFunction::constant(n, 0.0), RhsFunction::constant_value(1.0), DomainSpec::ball(n));
        SubsolutionOptions o = small_options();
        o.interior_samples = 1000;
        o.boundary_samples = 100;
        const auto rep = build_subsolution(p, o);
        const auto& sub = rep.sub;
        const double alpha = rep.alpha.alpha;
        for (const auto& x : rep.samples.interior) {
            const Eigen::VectorXd g = sub.r.gradient(x);
            // r_{i j-bar} + k (dr/dq-bar_i)(dr/dq_j), built entrywise.
            QuatMatrix m(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    m(i, j) = sub.k * dirac_weyl_bar_from_gradient(g, i) * dirac_weyl_from_gradient(g, j);
                    if (i == j) m(i, j) += Quaternion{alpha, 0, 0, 0};
                }
            }
            const double rank_one_det = moore_det(HyperHermitianMatrix(m, 1e-12));
            const double e = sub.s * sub.k * std::exp(sub.k * sub.r.value(x));
            const double expected = std::pow(e, double(n)) * rank_one_det;
            CHECK(sub.ma(x) == doctest::Approx(expected).epsilon(1e-6));
            const double lower = std::pow(alpha, double(n) - 1.0) * (alpha + sub.k * g.squaredNorm());
            CHECK(rank_one_det >= lower * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("subsolutions lie below the harmonic extension") {
    const std::vector<TestFunction> data{TestFunction::constant(1, 0.0), TestFunction::abs_sq(1),
                                         TestFunction::abs_sq(1, -1.0 / 16.0)};
    for (const auto& phi : data) {
        const auto p = make_problem(1, phi, RhsFunction::constant_value(1.0), DomainSpec::ball(1));
        const auto rep = build_subsolution(p, small_options());
        const auto h = harmonic_extension(phi, p.domain);
        for (const auto& x : rep.samples.interior) CHECK(rep.sub.value(x) <= h.value(x) + 1e-12);
    }
}

TEST_CASE("box domains give an spsh initial guess with a reported boundary mismatch") {
    const auto p = make_problem(1, TestFunction::abs_sq(1), RhsFunction::constant_value(8.0), DomainSpec::box(1, 0.5));
    const auto rep = build_subsolution(p, small_options());
    const auto v = verify_subsolution(rep.sub, p, rep.samples);
    CHECK(v.psh);
    CHECK(v.margin_ok);
    CHECK_FALSE(v.boundary_ok);
}
