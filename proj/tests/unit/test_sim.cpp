#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hypstab/errors.hpp"
#include "hypstab/sim.hpp"
#include "fixtures.hpp"

using namespace hypstab;

namespace {
constexpr double kPi = std::numbers::pi;
const Profile kOne = [](double) { return 1.0; };
}  // namespace

TEST_SUITE("sim") {

TEST_CASE("pure delay") {
    const IdeTrace tr = simulate_ide_steps({0.5, KernelSpec::zero(1.0)}, kOne, 12.0, 64);
    for (int k = 0; k <= 12; ++k) CHECK(tr.z[k * 64] == doctest::Approx(std::pow(0.5, k)));
    CHECK(tr.t.size() == tr.z.size());
    CHECK(tr.max_residual < 1e-14);

    const IdeTrace zero = simulate_ide_steps({0.0, KernelSpec::zero(1.0)}, kOne, 3.0, 64);
    for (std::size_t i = 1; i < zero.z.size(); ++i) CHECK(zero.z[i] == 0.0);
}

TEST_CASE("oscillating exact solution") {
    // cos(pi t / 2) solves the equation with the affine example kernel
    const IdeProblem p{fixtures::kCounterexampleXi, fixtures::counterexample_kernel()};
    const Profile exact = [](double t) { return std::cos(kPi * t / 2); };
    auto max_err = [&](int n) {
        const IdeTrace tr = simulate_ide_steps(p, exact, 8.0, n);
        double e = 0.0;
        for (std::size_t i = 0; i < tr.z.size(); ++i) e = std::max(e, std::abs(tr.z[i] - exact(tr.t[i])));
        return e;
    };
    const double e1 = max_err(128), e2 = max_err(256);
    CHECK(e1 < 1e-2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("time step validation") {
    const IdeProblem p{0.5, KernelSpec::zero(1.0)};
    CHECK_THROWS_AS(simulate_ide(p, kOne, 5.0, 1.0 / 32), ParameterError);
    CHECK_THROWS_AS(simulate_ide(p, kOne, 5.0, 0.0101), ParameterError);
    CHECK_THROWS_AS(simulate_ide(p, kOne, 0.5, 1.0 / 64), ParameterError);
    CHECK_NOTHROW(simulate_ide(p, kOne, 5.0, 1.0 / 64));
}

TEST_CASE("classification is stable under refinement") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    const IdeProblem n0{c.xi, truncate(c, 0)};
    for (int n : {64, 128, 256}) {
        CHECK(simulate_ide_steps(n0, kOne, 60.0, n).classification == TraceClass::Diverging);
    }
    const IdeProblem decaying{0.5, KernelSpec::zero(1.0)};
    for (int n : {64, 128}) {
        CHECK(simulate_ide_steps(decaying, kOne, 30.0, n).classification == TraceClass::Converging);
    }
}

TEST_CASE("window statistics") {
    const IdeTrace tr = simulate_ide_steps({0.5, KernelSpec::zero(1.0)}, kOne, 10.0, 64);
    REQUIRE(tr.window_sup.size() == 10);
    CHECK(tr.history_sup == 1.0);
    CHECK(tr.window_sup[0] == doctest::Approx(0.5));
    REQUIRE(tr.growth_indicator.size() == 9);
    for (double g : tr.growth_indicator) CHECK(g == doctest::Approx(std::log(0.5)));
}

TEST_CASE("zero data stays zero") {
    const Profile zero = [](double) { return 0.0; };
    const PdeState s = simulate_pde(fixtures::row5(), zero, zero, 2.0, 1e-3);
    for (double x : s.u) CHECK(x == 0.0);
    for (double x : s.v) CHECK(x == 0.0);
    CHECK(l2_norm(s) == 0.0);
}

TEST_CASE("decoupled transport is an exact shift") {
    const HyperbolicSystem sys{0.0, 0.0, 1.0, 1.0, 0.0, 0.0};
    const Profile bump = [](double x) { return std::sin(kPi * x); };
    const PdeState half = simulate_pde(sys, bump, bump, 0.5, 1e-3);
    REQUIRE(half.grid.cells_u == 1000);
    for (int i = 500; i <= 1000; i += 50) {
        const double x = i * half.grid.dx_u;
        CHECK(half.u[i] == doctest::Approx(bump(x - 0.5)).epsilon(1e-9));
        CHECK(half.v[1000 - i] == doctest::Approx(bump(1.0 - x + 0.5)).epsilon(1e-9));
    }
    const PdeState gone = simulate_pde(sys, bump, bump, 1.0 + 1e-3, 1e-3);
    CHECK(l2_norm(gone) < 1e-12);
}

TEST_CASE("initial conditions") {
    const HyperbolicSystem sys = fixtures::row5();
    const auto [u0, v0] = build_initial_conditions(sys);
    CHECK(u0(0.3) == 1.0);
    CHECK(v0(0.0) == doctest::Approx(-10.0 / 7.0));
    CHECK(v0(1.0) == doctest::Approx(0.5));
    CHECK(compatibility_residual(sys, u0, v0) < 1e-15);
    CHECK_THROWS_AS(build_initial_conditions({1.0, 1.0, 1.0, 1.0, 0.5, 0.0}), ParameterError);
    CHECK_THROWS_AS(simulate_pde(sys, kOne, kOne, 1.0, 1e-3), ParameterError);
}

TEST_CASE("grid and boundary closure") {
    const HyperbolicSystem sys = fixtures::row5();
    const PdeGrid g = pde_grid(sys, 1e-4);
    CHECK(g.cells_u == 8000);
    CHECK(g.cells_v == 11000);
    CHECK(g.cfl_u <= 1.0);
    CHECK(g.cfl_v <= 1.0);
    CHECK(g.cfl_u == doctest::Approx(1.0));
    CHECK_THROWS_AS(pde_grid(sys, 0.9), ParameterError);

    const auto [u0, v0] = build_initial_conditions(sys);
    const PdeState s = simulate_pde(sys, u0, v0, 3.0, 1e-3);
    CHECK(s.u.front() == doctest::Approx(sys.q * s.v.front()));
    CHECK(s.v.back() == doctest::Approx(sys.rho * s.u.back()));
    CHECK(!s.l2_history.empty());
    CHECK(s.l2_history.front().first == 0.0);
}

}
