#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mdebif/quadrature.hpp"
#include "mdebif/registry.hpp"
#include "mdebif/shooting.hpp"
#include "mdebif/solver.hpp"
#include "mdebif/variational.hpp"
#include "test_util.hpp"

using namespace mdebif;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("symbolic Jacobians of the built-in problems") {
    const ProblemDef liebau = builtin_problem("liebau");
    const JacobianPair jac = jacobians(liebau);
    Vec x(2);
    x << 2.0, -1.0;
    const Mat gp = jac.eval_gprime(liebau, x, 0.0);
    CHECK(gp(0, 0) == doctest::Approx(6 * 4.0 - 2 * 2.0 - 4).epsilon(1e-14));
    CHECK(gp(0, 1) == 0.0);
    CHECK(gp(1, 0) == 0.0);
    CHECK(gp(1, 1) == 0.0);

    const ProblemDef ex = builtin_problem("example-5.7");
    const JacobianPair jex = jacobians(ex);
    const Mat fp = jex.eval_fprime(ex, 0.4, Vec::Constant(1, 0.25), 0.0);
    CHECK(fp(0, 0) == doctest::Approx(0.4 + 2 * 0.25).epsilon(1e-14));
}

TEST_CASE("constant-coefficient f gives a constant Jacobian") {
    ProblemDef p(2, 1.0, {parse("2*x1 - x2", 2), parse("x1 + 3*x2", 2)},
                 {parse("0", 2), parse("0", 2)}, Integrator::zero(1.0), {-1.0, 1.0},
                 {{{-100.0, 100.0}}, {{-100.0, 100.0}}}, "");
    const JacobianPair jac = jacobians(p);
    for (double t : {0.0, 0.5}) {
        const Mat a = jac.eval_fprime(p, 0.0, Vec::Zero(2), t);
        CHECK(a(0, 0) == 2.0);
        CHECK(a(0, 1) == -1.0);
        CHECK(a(1, 0) == 1.0);
        CHECK(a(1, 1) == 3.0);
    }
}

TEST_CASE("monodromy of the trivial branch of the scalar example is exp(lambda)") {
    const ProblemDef p = builtin_problem("example-5.7");
    for (double lambda : {-0.5, 0.3, 0.5}) {
        const RegulatedPath zero = solve_ivp(p, lambda, Vec::Zero(1), {});
        const MonodromyReport rep = monodromy(p, lambda, zero, {});
        CHECK(rep.M(0, 0) == doctest::Approx(std::exp(lambda)).epsilon(1e-9));
        CHECK(rep.det_I_minus_M ==
              doctest::Approx(1.0 - std::exp(lambda)).epsilon(1e-9));
        REQUIRE(rep.jump_factors.size() == 1);
        CHECK(rep.jump_factors[0].second(0, 0) == doctest::Approx(1.0)); // g'(0) = 0
        CHECK(rep.eigenvalues[0].real() == doctest::Approx(std::exp(lambda)).epsilon(1e-9));
        CHECK(rep.eigenvalues[0].imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("pure jump toy: M = 1 + a") {
    const double a = 0.7;
    ProblemDef p(1, 1.0, {parse("0", 1)}, {parse("0.7*x1", 1)},
                 Integrator(parse("0", 0), {{0.5, 1.0}}, 1.0), {-1.0, 1.0}, {{{-5.0, 5.0}}},
                 "");
    const RegulatedPath ref = solve_ivp(p, 0.0, Vec::Constant(1, 1.0), {});
    const MonodromyReport rep = monodromy(p, 0.0, ref, {});
    CHECK(rep.M(0, 0) == doctest::Approx(1.0 + a).epsilon(1e-12));
    const Mat fd = monodromy_fd_check(p, 0.0, Vec::Constant(1, 1.0), 1e-6, {});
    CHECK(fd(0, 0) == doctest::Approx(1.0 + a).epsilon(1e-7));
}

TEST_CASE("planar pumping linearization: det(I - M) matches the frozen reference") {
    // Independent reference: the second-order equation with the published
    // coefficient integrated elsewhere gives det(I - M(0)) = -23.29081.
    const ProblemDef p = builtin_problem("liebau");
    Vec x0(2);
    x0 << 27.0, 0.0;
    const RegulatedPath ref = solve_ivp(p, 0.0, x0, {});
    const MonodromyReport rep = monodromy(p, 0.0, ref, {});
    CHECK(std::abs(rep.det_I_minus_M) > 1e-3);
    CHECK(rep.det_I_minus_M == doctest::Approx(-23.29081448).epsilon(1e-5));
    CHECK(rep.M.determinant() == doctest::Approx(1.0).epsilon(1e-7)); // zero-trace flow
    REQUIRE(rep.jump_factors.size() == 1);
    CHECK((rep.jump_factors[0].second - Mat::Identity(2, 2)).norm() <= 1e-7);
}

TEST_CASE("finite-difference Poincare Jacobian validates the variational route") {
    const ProblemDef ex = builtin_problem("example-5.7");
    const Mat fd = monodromy_fd_check(ex, 0.3, Vec::Zero(1), 1e-6, {});
    CHECK(fd(0, 0) == doctest::Approx(std::exp(0.3)).epsilon(1e-5));

    const ProblemDef liebau = builtin_problem("liebau");
    Vec x0(2);
    x0 << 27.0, 0.0;
    const RegulatedPath ref = solve_ivp(liebau, 0.1, x0, {});
    const MonodromyReport rep = monodromy(liebau, 0.1, ref, {});
    const Mat fd2 = monodromy_fd_check(liebau, 0.1, x0, 1e-6, {});
    const double tol = std::max(1e-5, 1e-3 * mat_norm(rep.M));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(fd2(i, j) - rep.M(i, j)) <= tol);
}

TEST_CASE("linear constant system: monodromy equals the matrix exponential") {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Mat a(2, 2);
    a << -1.0 + 0.3 * uni(rng), uni(rng), uni(rng), -1.2 + 0.3 * uni(rng);
    char f1[64], f2[64];
    std::snprintf(f1, sizeof f1, "%.17g*x1 + %.17g*x2", a(0, 0), a(0, 1));
    std::snprintf(f2, sizeof f2, "%.17g*x1 + %.17g*x2", a(1, 0), a(1, 1));
    const double T = 1.5;
    ProblemDef p(2, T, {parse(f1, 2), parse(f2, 2)}, {parse("0", 2), parse("0", 2)},
                 Integrator::zero(T), {-1.0, 1.0}, {{{-100.0, 100.0}}, {{-100.0, 100.0}}},
                 "");
    const RegulatedPath ref = solve_ivp(p, 0.0, Vec::Zero(2), {});
    const MonodromyReport rep = monodromy(p, 0.0, ref, {});
    const Mat exact = testutil::expm_ref(a * T);
    const Mat fd = monodromy_fd_check(p, 0.0, Vec::Zero(2), 1e-6, {});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(rep.M(i, j) - exact(i, j)) <= 1e-6);
            CHECK(std::abs(fd(i, j) - exact(i, j)) <= 1e-6);
        }
    // g == 0: jump factors absent, M is the classical monodromy.
    CHECK(rep.jump_factors.empty());
}

TEST_CASE("with g == 0 the jump factors are identities and M is classical") {
    ProblemDef pj(1, 1.0, {parse("0.4*x1", 1)}, {parse("0", 1)},
                  Integrator(parse("0", 0), {{0.3, 2.0}, {0.7, -1.0}}, 1.0), {-1.0, 1.0},
                  {{{-10.0, 10.0}}}, "");
    const RegulatedPath ref = solve_ivp(pj, 0.0, Vec::Constant(1, 1.0), {});
    const MonodromyReport rep = monodromy(pj, 0.0, ref, {});
    REQUIRE(rep.jump_factors.size() == 2);
    for (const auto& [tau, m] : rep.jump_factors)
        CHECK(m(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.M(0, 0) == doctest::Approx(std::exp(0.4)).epsilon(1e-9));
}

TEST_CASE("Liouville consistency: det M = prod det(jump factors) * exp(int tr A)") {
    const ProblemDef p = builtin_problem("example-5.7");
    const double lambda = 0.35;
    const RegulatedPath ref = solve_ivp(p, lambda, Vec::Constant(1, 0.05), {});
    const MonodromyReport rep = monodromy(p, lambda, ref, {});
    const JacobianPair jac = jacobians(p);
    auto trace_a = [&](double t) {
        return jac.eval_fprime(p, lambda, ref.right_limit(t), t).trace();
    };
    const double smooth = std::exp(
        integrate_split(trace_a, 0.0, p.T, 1e-12, std::vector<double>{0.5}));
    double factor_det = 1.0;
    for (const auto& [tau, m] : rep.jump_factors) factor_det *= m.determinant();
    CHECK(rep.M.determinant() ==
          doctest::Approx(smooth * factor_det).epsilon(1e-6));
}

TEST_CASE("non-differentiable right-hand sides are rejected by jacobians") {
    ProblemDef p(1, 1.0, {parse("heaviside(x1)*x1", 1)}, {parse("0", 1)},
                 Integrator::zero(1.0), {-1.0, 1.0}, {{{-5.0, 5.0}}}, "");
    CHECK_THROWS_AS(jacobians(p), NonDifferentiableError);
}

TEST_CASE("singular jump factor is rejected") {
    // g = -x1 with a unit jump makes the factor 1 + (-1) = 0.
    ProblemDef p(1, 1.0, {parse("0", 1)}, {parse("-x1", 1)},
                 Integrator(parse("0", 0), {{0.5, 1.0}}, 1.0), {-1.0, 1.0}, {{{-5.0, 5.0}}},
                 "");
    const RegulatedPath ref = solve_ivp(p, 0.0, Vec::Constant(1, 1.0), {});
    CHECK_THROWS_AS(monodromy(p, 0.0, ref, {}), SingularJumpError);
}

TEST_CASE("report internals are consistent") {
    const ProblemDef p = builtin_problem("liebau");
    Vec x0(2);
    x0 << 27.0, 0.0;
    const RegulatedPath ref = solve_ivp(p, 0.05, x0, {});
    const MonodromyReport rep = monodromy(p, 0.05, ref, {});
    const double recomputed = (Mat::Identity(2, 2) - rep.M).determinant();
    CHECK(std::abs(rep.det_I_minus_M - recomputed) <=
          1e-12 * std::max(1.0, std::abs(recomputed)));
    for (const auto& [tau, m] : rep.jump_factors) CHECK(std::abs(m.determinant()) > 1e-12);
}

TEST_CASE("variational solutions expand initial vectors through the flow") {
    const ProblemDef p = builtin_problem("example-5.7");
    const RegulatedPath zero = solve_ivp(p, 0.0, Vec::Zero(1), {});
    const RegulatedPath z = variational_solution(p, 0.0, zero, Vec::Constant(1, 1.0), {});
    for (double t = 0.0; t <= 1.0; t += 0.1)
        CHECK(z(t)[0] == doctest::Approx(1.0).epsilon(1e-9)); // constants at lambda = 0
}
