#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "hypstab/params.hpp"
#include "hypstab/kernel.hpp"

namespace fixtures {

// (sigma+, sigma-, 1/lambda, 1/mu, rho, q)
inline constexpr std::array<std::array<double, 6>, 5> kTableRows{{
    {1.1, 0.4, 1.0, 1.2, 0.4, -0.5},
    {-0.8, 0.7, 1.0, 1.2, 0.4, 0.25},
    {1.3, -0.95, 1.8, 0.44, 0.45, 0.25},
    {1.3, -1.2, 1.8, 1.5, 0.45, 0.25},
    {2.3, -3.5, 0.8, 1.1, 0.5, -0.7},
}};

inline hypstab::HyperbolicSystem table_row(int i) {
    const auto& r = kTableRows.at(i);
    return hypstab::HyperbolicSystem::from_transport_times(r[0], r[1], r[2], r[3], r[4], r[5]);
}

inline hypstab::HyperbolicSystem row5() { return table_row(4); }

// Affine kernel with a root of Delta at i pi / 2 for tau = 1, xi = 1/2.
inline hypstab::KernelSpec counterexample_kernel() {
    constexpr double pi = std::numbers::pi;
    const double d = 16.0 - 4.0 * pi;
    return hypstab::KernelSpec::polynomial(1.0, {(pi * pi + 2.0 * pi) / d, -3.0 * pi * pi / d});
}

inline constexpr double kCounterexampleXi = 0.5;

}  // namespace fixtures
