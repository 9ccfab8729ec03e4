#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypstab/errors.hpp"
#include "hypstab/roots.hpp"
#include "hypstab/stability.hpp"
#include "fixtures.hpp"

using namespace hypstab;

namespace {

AnalyticFn rational(std::vector<cplx> zeros, std::vector<cplx> poles) {
    return [zeros, poles](cplx s) {
        cplx v = 1.0, logd = 0.0;
        for (cplx z : zeros) {
            v *= s - z;
            logd += 1.0 / (s - z);
        }
        for (cplx p : poles) {
            v /= s - p;
            logd -= 1.0 / (s - p);
        }
        return DeltaValue{v, v * logd};
    };
}

}  // namespace

TEST_SUITE("roots") {

TEST_CASE("no zeros") {
    const CharFn one(0.0, KernelSpec::zero(1.0));
    const WindingResult w = winding_count(one, {0.0, 5.0, -20.0, 20.0});
    CHECK(w.count == 0);
    CHECK(find_all_roots(one, {0.0, 5.0, -20.0, 20.0}).roots.empty());
}

TEST_CASE("rational function") {
    const AnalyticFn f = rational({1.0, 2.0}, {-3.0, -3.0});
    CHECK(winding_count(f, {0.0, 5.0, -20.0, 20.0}, 1.0).count == 2);
    CHECK(winding_count(f, {-2.5, 0.5, -20.0, 20.0}, 1.0).count == 0);
    const RootSet rs = find_all_roots(f, {0.0, 5.0, -20.0, 20.0}, 1.0);
    REQUIRE(rs.roots.size() == 2);
    std::vector<double> re{rs.roots[0].s.real(), rs.roots[1].s.real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("double root") {
    const AnalyticFn f = rational({cplx(1.0, 1.0), cplx(1.0, 1.0)}, {-2.0});
    CHECK(winding_count(f, {0.0, 3.0, -3.0, 3.0}, 1.0).count == 2);
    const RootSet rs = find_all_roots(f, {0.0, 3.0, -3.0, 3.0}, 1.0);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
    CHECK(std::abs(rs.roots[0].s - cplx(1.0, 1.0)) < 1e-7);
}

TEST_CASE("counts add over a split") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    const CharFn f(c.xi, truncate(c, 1));
    const int whole = winding_count(f, {-2.0, 4.0, -15.0, 15.0}).count;
    const int left = winding_count(f, {-2.0, 0.7, -15.0, 15.0}).count;
    const int right = winding_count(f, {0.7, 4.0, -15.0, 15.0}).count;
    CHECK(whole == left + right);
    CHECK(whole > 0);
}

TEST_CASE("roots of a real kernel come in conjugate pairs") {
    const CharFn f(fixtures::kCounterexampleXi, fixtures::counterexample_kernel());
    const RootSet rs = find_all_roots(f, {-5.0, 5.0, -20.0, 20.0});
    CHECK(rs.unresolved.empty());
    int total = 0;
    for (const LocatedRoot& r : rs.roots) {
        total += r.multiplicity;
        const bool mirrored = std::any_of(rs.roots.begin(), rs.roots.end(), [&](const LocatedRoot& o) {
            return std::abs(o.s - std::conj(r.s)) < 1e-8;
        });
        CHECK(mirrored);
        CHECK(std::abs(f.delta(r.s)) < 1e-9);
    }
    CHECK(total == rs.total_count);
}

TEST_CASE("imaginary roots of the affine example") {
    const CharFn f(fixtures::kCounterexampleXi, fixtures::counterexample_kernel());
    const RootSet rs = find_all_roots(f, {-5.0, 5.0, -20.0, 20.0});
    int on_axis = 0;
    for (const LocatedRoot& r : rs.roots) {
        if (std::abs(r.s.real()) < 1e-8) {
            ++on_axis;
            CHECK(std::abs(std::abs(r.s.imag()) - std::numbers::pi / 2) < 1e-8);
        }
    }
    CHECK(on_axis == 2);
}

TEST_CASE("table rows have no roots in the right half-plane") {
    for (int row = 0; row < 5; ++row) {
        const DerivedConstants c = derive_constants(fixtures::table_row(row));
        const CharFn f(c.xi, KernelSpec::closed_form(c));
        const FrequencyWindow w = frequency_window(f);
        CHECK(winding_count(f, right_half_plane_rect(f, w.omega_max)).count == 0);
    }
}

TEST_CASE("degenerate rectangle") {
    CHECK_THROWS_AS(winding_count(rational({}, {}), {1.0, 1.0, 0.0, 1.0}, 1.0), ParameterError);
}

}
