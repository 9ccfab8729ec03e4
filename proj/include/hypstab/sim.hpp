#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hypstab/kernel.hpp"
#include "hypstab/params.hpp"

namespace hypstab {

using Profile = std::function<double(double)>;

/// z(t) = xi z(t - tau) + int_0^tau N(nu) z(t - nu) dnu, tau taken from the kernel.
struct IdeProblem {
    double xi = 0.0;
    KernelSpec kernel = KernelSpec::zero(1.0);
};

enum class TraceClass { Converging, Diverging, Undetermined };

const char* to_string(TraceClass c);

struct IdeThresholds {
    double growth = 0.01;         ///< log sup ratio per window counted as growth
    int windows = 10;             ///< consecutive growing windows to call divergence
    double decay = 1e-6;          ///< window sup relative to the history sup
};

struct IdeTrace {
    double dt = 0.0;
    int steps_per_delay = 0;
    std::vector<double> t;        ///< 0, dt, 2 dt, ..., including the history at t = 0
    std::vector<double> z;
    std::vector<double> window_sup;        ///< sup |z| over (k tau, (k+1) tau]
    std::vector<double> growth_indicator;  ///< log(window_sup[k] / window_sup[k-1]), k >= 1
    double history_sup = 0.0;
    TraceClass classification = TraceClass::Undetermined;
    double max_residual = 0.0;    ///< relative residual of the discrete equation
};

/// Trapezoid rule on the grid dt = tau / n with the nu = 0 node solved implicitly.
/// The history is sampled on [-tau, 0]; the equation is imposed for t > 0.
/// Throws ParameterError unless n >= 64 is an integer and horizon >= tau.
IdeTrace simulate_ide(const IdeProblem& p, const Profile& history, double horizon, double dt,
                      const IdeThresholds& th = {});

/// Convenience: dt = tau / n.
IdeTrace simulate_ide_steps(const IdeProblem& p, const Profile& history, double horizon,
                            int steps_per_delay, const IdeThresholds& th = {});

TraceClass classify_trace(const IdeTrace& trace, const IdeThresholds& th = {});

struct PdeOptions {
    int l2_stride = 100;          ///< record the L2 norm every this many steps
    double compat_tol = 1e-9;
};

struct PdeGrid {
    int cells_u = 0, cells_v = 0;
    double dx_u = 0.0, dx_v = 0.0;
    double cfl_u = 0.0, cfl_v = 0.0;
};

/// Cell counts floor(1 / (speed dt)), so each CFL number is at most 1 and as close to 1 as the
/// uniform grid allows. Throws ParameterError when a speed times dt exceeds 1.
PdeGrid pde_grid(const HyperbolicSystem& sys, double dt);

struct PdeState {
    PdeGrid grid;
    double dt = 0.0;
    double t = 0.0;
    std::vector<double> u, v;     ///< nodal values, cells + 1 each
    std::vector<std::pair<double, double>> l2_history;  ///< (t, ||(u, v)||_L2)
};

/// First-order upwind transport, explicit source coupling through linear interpolation
/// between the two grids, then boundary closure v(1) = rho u(1), u(0) = q v(0).
PdeState simulate_pde(const HyperbolicSystem& sys, const Profile& u0, const Profile& v0,
                      double horizon, double dt, const PdeOptions& opt = {});

/// u0 = 1 and v0 the affine profile with v0(0) = 1 / q, v0(1) = rho.
/// Throws ParameterError when q == 0.
std::pair<Profile, Profile> build_initial_conditions(const HyperbolicSystem& sys);

/// max(|u0(0) - q v0(0)|, |v0(1) - rho u0(1)|).
double compatibility_residual(const HyperbolicSystem& sys, const Profile& u0, const Profile& v0);

double l2_norm(const PdeState& s);

}  // namespace hypstab
