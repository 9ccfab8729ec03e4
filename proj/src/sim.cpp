#include "hypstab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypstab/errors.hpp"

namespace hypstab {

const char* to_string(TraceClass c) {
    switch (c) {
        case TraceClass::Converging: return "converging";
        case TraceClass::Diverging: return "diverging";
        case TraceClass::Undetermined: return "undetermined";
    }
    return "unknown";
}

TraceClass classify_trace(const IdeTrace& trace, const IdeThresholds& th) {
    const auto& g = trace.growth_indicator;
    if (static_cast<int>(g.size()) >= th.windows &&
        std::all_of(g.end() - th.windows, g.end(), [&](double x) { return x > th.growth; })) {
        return TraceClass::Diverging;
    }
    if (!trace.window_sup.empty() && trace.window_sup.back() < th.decay * trace.history_sup) {
        return TraceClass::Converging;
    }
    return TraceClass::Undetermined;
}

IdeTrace simulate_ide(const IdeProblem& p, const Profile& history, double horizon, double dt,
                      const IdeThresholds& th) {
    const double tau = p.kernel.tau();
    if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
    const double ratio = tau / dt;
    const int n = static_cast<int>(std::lround(ratio));
    if (std::abs(ratio - n) > 1e-9 * ratio || n < 64) {
        std::ostringstream msg;
        msg << "dt must equal tau / n with integer n >= 64 (tau / dt = " << ratio << ")";
        throw ParameterError("dt", msg.str());
    }
    if (!(horizon >= tau)) throw ParameterError("horizon", "horizon must be at least tau");
    return simulate_ide_steps(p, history, horizon, n, th);
}

IdeTrace simulate_ide_steps(const IdeProblem& p, const Profile& history, double horizon,
                            int n, const IdeThresholds& th) {
    const double tau = p.kernel.tau();
    if (n < 1) throw ParameterError("steps_per_delay", "need at least one step per delay");
    const double dt = tau / n;

    std::vector<double> w(n + 1);
    for (int j = 0; j <= n; ++j) {
        w[j] = dt * p.kernel(std::min(j * dt, tau)) * ((j == 0 || j == n) ? 0.5 : 1.0);
    }
    const double pivot = 1.0 - w[0];
    if (std::abs(pivot) < 1e-12) throw ParameterError("dt", "implicit trapezoid step is singular");

    const long steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
    // buf[k + n] holds z(k dt) for k = -n .. steps.
    std::vector<double> buf(n + steps + 1);
    double hsup = 0.0;
    for (int k = -n; k <= 0; ++k) {
        buf[k + n] = history(k == -n ? -tau : k * dt);
        hsup = std::max(hsup, std::abs(buf[k + n]));
    }

    IdeTrace out;
    out.dt = dt;
    out.steps_per_delay = n;
    out.history_sup = hsup;
    for (long k = 1; k <= steps; ++k) {
        const long i = k + n;
        double acc = p.xi * buf[i - n];
        for (int j = 1; j <= n; ++j) acc += w[j] * buf[i - j];
        buf[i] = acc / pivot;
    }

    double worst = 0.0;
    for (long k = 1; k <= steps; ++k) {
        const long i = k + n;
        double r = buf[i] - p.xi * buf[i - n];
        double scale = std::abs(buf[i]) + std::abs(p.xi * buf[i - n]);
        for (int j = 0; j <= n; ++j) {
            r -= w[j] * buf[i - j];
            scale += std::abs(w[j] * buf[i - j]);
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(r) / scale);
    }
    out.max_residual = worst;

    out.t.resize(steps + 1);
    out.z.assign(buf.begin() + n, buf.end());
    for (long k = 0; k <= steps; ++k) out.t[k] = k * dt;

    for (long start = 1; start + n - 1 <= steps; start += n) {
        double s = 0.0;
        for (long k = start; k < start + n; ++k) s = std::max(s, std::abs(out.z[k]));
        out.window_sup.push_back(s);
    }
    for (std::size_t k = 1; k < out.window_sup.size(); ++k) {
        const double a = out.window_sup[k - 1], b = out.window_sup[k];
        double g;
        if (a > 0.0 && b > 0.0) g = std::log(b / a);
        else if (b > 0.0) g = INFINITY;
        else g = a > 0.0 ? -INFINITY : 0.0;
        out.growth_indicator.push_back(g);
    }
    out.classification = classify_trace(out, th);
    return out;
}

PdeGrid pde_grid(const HyperbolicSystem& sys, double dt) {
    if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
    PdeGrid g;
    g.cells_u = static_cast<int>(std::floor(1.0 / (sys.lambda * dt) + 1e-9));
    g.cells_v = static_cast<int>(std::floor(1.0 / (sys.mu * dt) + 1e-9));
    if (g.cells_u < 1 || g.cells_v < 1) {
        throw ParameterError("dt", "CFL condition cannot hold: speed * dt exceeds the domain length");
    }
    g.dx_u = 1.0 / g.cells_u;
    g.dx_v = 1.0 / g.cells_v;
    g.cfl_u = std::min(1.0, sys.lambda * dt / g.dx_u);
    g.cfl_v = std::min(1.0, sys.mu * dt / g.dx_v);
    return g;
}

double compatibility_residual(const HyperbolicSystem& sys, const Profile& u0, const Profile& v0) {
    return std::max(std::abs(u0(0.0) - sys.q * v0(0.0)), std::abs(v0(1.0) - sys.rho * u0(1.0)));
}

namespace {

double trapezoid_sq(const std::vector<double>& f, double dx) {
    double s = 0.5 * (f.front() * f.front() + f.back() * f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * f[i];
    return s * dx;
}

// Interpolation of a nodal field on a uniform grid at the nodes of another.
struct Coupling {
    std::vector<int> left;
    std::vector<double> frac;

    Coupling(int target_cells, int source_cells) : left(target_cells + 1), frac(target_cells + 1) {
        for (int i = 0; i <= target_cells; ++i) {
            const double x = static_cast<double>(i) / target_cells * source_cells;
            int k = std::min(static_cast<int>(std::floor(x)), source_cells - 1);
            left[i] = k;
            frac[i] = x - k;
        }
    }

    double at(const std::vector<double>& f, int i) const {
        return f[left[i]] + frac[i] * (f[left[i] + 1] - f[left[i]]);
    }
};

}  // namespace

double l2_norm(const PdeState& s) {
    return std::sqrt(trapezoid_sq(s.u, s.grid.dx_u) + trapezoid_sq(s.v, s.grid.dx_v));
}

PdeState simulate_pde(const HyperbolicSystem& sys, const Profile& u0, const Profile& v0,
                      double horizon, double dt, const PdeOptions& opt) {
    if (compatibility_residual(sys, u0, v0) > opt.compat_tol) {
        throw ParameterError("initial", "initial data violate the boundary conditions");
    }
    PdeState s;
    s.grid = pde_grid(sys, dt);
    s.dt = dt;
    const int nu = s.grid.cells_u, nv = s.grid.cells_v;
    s.u.resize(nu + 1);
    s.v.resize(nv + 1);
    for (int i = 0; i <= nu; ++i) s.u[i] = u0(i * s.grid.dx_u);
    for (int j = 0; j <= nv; ++j) s.v[j] = v0(j * s.grid.dx_v);

    const Coupling v_at_u(nu, nv), u_at_v(nv, nu);
    const double cu = s.grid.cfl_u, cv = s.grid.cfl_v;
    const double su = dt * sys.sigma_plus, sv = dt * sys.sigma_minus;
    std::vector<double> un(nu + 1), vn(nv + 1);

    const long steps = static_cast<long>(std::llround(horizon / dt));
    s.l2_history.emplace_back(0.0, l2_norm(s));
    for (long k = 1; k <= steps; ++k) {
        for (int i = 1; i <= nu; ++i) {
            un[i] = s.u[i] - cu * (s.u[i] - s.u[i - 1]) + su * v_at_u.at(s.v, i);
        }
        for (int j = 0; j < nv; ++j) {
            vn[j] = s.v[j] + cv * (s.v[j + 1] - s.v[j]) + sv * u_at_v.at(s.u, j);
        }
        vn[nv] = sys.rho * un[nu];
        un[0] = sys.q * vn[0];
        s.u.swap(un);
        s.v.swap(vn);
        s.t = k * dt;
        if (k % opt.l2_stride == 0 || k == steps) s.l2_history.emplace_back(s.t, l2_norm(s));
    }
    return s;
}

std::pair<Profile, Profile> build_initial_conditions(const HyperbolicSystem& sys) {
    if (sys.q == 0.0) throw ParameterError("q", "affine initial data need q != 0");
    const double left = 1.0 / sys.q, right = sys.rho;
    Profile u0 = [](double) { return 1.0; };
    Profile v0 = [left, right](double x) { return left + (right - left) * x; };
    return {u0, v0};
}

}  // namespace hypstab
