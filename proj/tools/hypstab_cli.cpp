#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "hypstab/criteria.hpp"
#include "hypstab/errors.hpp"
#include "hypstab/io.hpp"
#include "hypstab/roots.hpp"
#include "hypstab/sim.hpp"
#include "hypstab/stability.hpp"

namespace fs = std::filesystem;
using namespace hypstab;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitSoftware = 70;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SystemArgs {
    std::optional<double> sigma_plus, sigma_minus, lambda, mu, inv_lambda, inv_mu, rho, q;
    std::string kernel_path;
    int truncation = -1;

    void attach(CLI::App* app, bool with_truncation = true) {
        app->add_option("--sigma-plus", sigma_plus, "coupling sigma+ in the u equation");
        app->add_option("--sigma-minus", sigma_minus, "coupling sigma- in the v equation");
        app->add_option("--lambda", lambda, "speed of u");
        app->add_option("--mu", mu, "speed of v");
        app->add_option("--inv-lambda", inv_lambda, "transport time 1/lambda");
        app->add_option("--inv-mu", inv_mu, "transport time 1/mu");
        app->add_option("--rho", rho, "boundary gain at x = 1");
        app->add_option("--q", q, "boundary gain at x = 0");
        app->add_option("--kernel", kernel_path, "kernel JSON file instead of system parameters");
        if (with_truncation) {
            app->add_option("--truncation", truncation, "use the truncation N_p of the closed-form kernel")
                ->check(CLI::Range(0, kMaxTruncationOrder));
        }
    }

    bool has_system() const {
        return sigma_plus || sigma_minus || lambda || mu || inv_lambda || inv_mu || rho || q;
    }

    HyperbolicSystem system() const {
        auto req = [](const std::optional<double>& v, const char* name) {
            if (!v) throw UsageError(std::string("missing --") + name);
            return *v;
        };
        HyperbolicSystem s;
        s.sigma_plus = req(sigma_plus, "sigma-plus");
        s.sigma_minus = req(sigma_minus, "sigma-minus");
        s.rho = req(rho, "rho");
        s.q = req(q, "q");
        if (lambda.has_value() == inv_lambda.has_value()) throw UsageError("give exactly one of --lambda, --inv-lambda");
        if (mu.has_value() == inv_mu.has_value()) {
            throw UsageError("give exactly one of --mu, --inv-mu");
        }
        if (inv_lambda && !(*inv_lambda > 0.0)) throw ParameterError("inv_lambda", "1/lambda must be positive");
        if (inv_mu && !(*inv_mu > 0.0)) throw ParameterError("inv_mu", "1/mu must be positive");
        s.lambda = lambda ? *lambda : 1.0 / *inv_lambda;
        s.mu = mu ? *mu : 1.0 / *inv_mu;
        derive_constants(s);
        return s;
    }

    KernelFile kernel() const {
        if (!kernel_path.empty() && has_system()) throw UsageError("--kernel excludes system parameters");
        KernelFile k;
        if (!kernel_path.empty()) {
            k = load_kernel_file(kernel_path);
        } else {
            k.system = system();
            const DerivedConstants c = derive_constants(*k.system);
            k.xi = c.xi;
            k.kernel = KernelSpec::closed_form(c);
        }
        if (truncation >= 0) {
            const DerivedConstants* c = k.kernel.constants();
            if (!c) throw UsageError("--truncation needs a closed-form kernel");
            k.kernel = truncate(*c, truncation);
        }
        return k;
    }
};

struct TolArgs {
    StabilityConfig cfg;
    QuadratureConfig qc;

    void attach(CLI::App* app) {
        app->add_option("--boundary-tol", cfg.boundary_tol, "|Delta(0)| treated as zero")
            ->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--imag-tol", cfg.imag_root_rel_tol, "relative |S| flagging an imaginary root")
            ->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--tangential-tol", cfg.tangential_tol, "|M| at a critical point counted as a double zero")
            ->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--window-safety", cfg.window_safety, "factor on the frequency window")
            ->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--grid-refine", cfg.grid_refine, "divide the M scan step")
            ->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--quad-nodes", qc.base_nodes, "Gauss-Legendre base nodes")
            ->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--quad-doublings", qc.max_doublings, "node doublings")->capture_default_str();
        app->add_option("--quad-tol", qc.rel_tol, "quadrature relative tolerance")
            ->check(CLI::PositiveNumber)->capture_default_str();
    }
};

int verdict_exit(VerdictKind v) {
    switch (v) {
        case VerdictKind::Stable: return 0;
        case VerdictKind::Unstable: return 1;
        default: return 2;
    }
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

void print_summary(std::ostream& os, const StabilityReport& r) {
    os << "verdict: " << to_string(r.verdict.kind);
    if (r.verdict.unstable_count) os << " (" << *r.verdict.unstable_count << " roots with Re s > 0)";
    os << "\n  " << r.verdict.reason << "\n";
    os << "  tau = " << fmt("%.6g", r.tau) << ", xi = " << fmt("%.6g", r.xi) << ", kernel " << r.kernel_kind
       << "\n";
    os << "  int N = " << fmt("%.6f", r.kernel_integral) << ", Delta(0) = M(0) = " << fmt("%.6f", r.delta_at_zero)
       << "\n";
    if (r.window) os << "  omega_max = " << fmt("%.4g", r.window->omega_max) << "\n";
    os << "  zeros of M: " << r.m_zeros.size();
    for (const auto& z : r.m_zeros) os << "  " << fmt("%.6g", z.omega) << (z.multiplicity > 1 ? "(x2)" : "");
    os << "\n";
    if (r.gamma) os << "  Gamma = " << *r.gamma << "\n";
    if (!r.imaginary_roots.empty()) {
        os << "  imaginary roots at omega =";
        for (double w : r.imaginary_roots) os << ' ' << fmt("%.10g", w);
        os << "\n";
    }
}

int cmd_analyze(const SystemArgs& sa, const TolArgs& ta, const std::string& json_path, bool json_stdout) {
    const KernelFile k = sa.kernel();
    const CharFn f(k.xi, k.kernel, ta.qc);
    const StabilityReport r = analyze(f, ta.cfg);
    Json j = report_to_json(r);
    if (k.system) j["system"] = system_to_json(*k.system);
    if (!json_path.empty()) write_file(json_path, j.dump(2) + "\n");
    if (json_stdout) {
        std::cout << j.dump(2) << "\n";
    } else {
        print_summary(std::cout, r);
    }
    return verdict_exit(r.verdict.kind);
}

int cmd_roots(const SystemArgs& sa, const TolArgs& ta, SearchRect rect, bool rhp, const std::string& out) {
    const KernelFile k = sa.kernel();
    const CharFn f(k.xi, k.kernel, ta.qc);
    if (rhp) {
        const FrequencyWindow w = frequency_window(f, ta.cfg);
        rect = right_half_plane_rect(f, w.omega_max);
    }
    const RootSet roots = find_all_roots(f, rect);
    std::ostringstream csv;
    write_roots_csv(csv, roots);
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        write_file(out, csv.str());
    }
    std::cerr << "roots in [" << rect.re_min << ", " << rect.re_max << "] x [" << rect.im_min << ", "
              << rect.im_max << "]: " << roots.total_count << " (located " << roots.roots.size()
              << ", unresolved boxes " << roots.unresolved.size() << ")\n";
    return roots.unresolved.empty() ? 0 : 2;
}

int cmd_compare(const std::string& input, int jobs, const std::string& csv_out, const std::string& json_out,
                const TolArgs& ta) {
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open " + input);
    const ParameterTable table = read_parameter_table(in);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<CriteriaRow> rows(table.rows.size());
    std::vector<std::string> errors(table.rows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
            try {
                rows[i] = compare_all(table.rows[i].system, ta.cfg, ta.qc);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<CriteriaRow> done;
    Json arr = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!errors[i].empty()) {
            std::cerr << "warning: line " << table.rows[i].line << ": " << errors[i] << "\n";
            continue;
        }
        done.push_back(rows[i]);
        arr.push_back(criteria_to_json(rows[i]));
    }
    std::ostringstream csv;
    write_criteria_csv(csv, done);
    if (csv_out.empty()) {
        std::cout << csv.str();
    } else {
        write_file(csv_out, csv.str());
    }
    if (!json_out.empty()) write_file(json_out, arr.dump(2) + "\n");
    return 0;
}

std::string gnuplot_script(const std::string& csv, const std::string& title, const std::string& ylabel,
                           bool logscale) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel 't'\nset ylabel '" << ylabel << "'\n";
    if (logscale) gp << "set logscale y\n";
    gp << "plot '" << csv << "' using 1:2 with lines\n";
    return gp.str();
}

int cmd_simulate(const std::string& mode, const SystemArgs& sa, double horizon, double dt, int steps,
                 int stride, const std::string& out_dir, bool zero) {
    const fs::path dir(out_dir);
    if (mode == "pde") {
        const HyperbolicSystem sys = sa.system();
        auto [u0, v0] = build_initial_conditions(sys);
        if (zero) {
            u0 = [](double) { return 0.0; };
            v0 = u0;
        }
        PdeOptions opt;
        opt.l2_stride = stride;
        const PdeState s = simulate_pde(sys, u0, v0, horizon, dt > 0 ? dt : 1e-4, opt);
        std::ostringstream csv;
        write_l2_history_csv(csv, s);
        write_file(dir / "pde_l2.csv", csv.str());
        write_file(dir / "pde_l2.json", pde_metadata_json(sys, s).dump(2) + "\n");
        write_file(dir / "pde_l2.gp", gnuplot_script("pde_l2.csv", "L2 norm of (u, v)", "||(u,v)||", true));
        std::cout << "pde: L2 " << fmt("%.6e", s.l2_history.front().second) << " -> "
                  << fmt("%.6e", s.l2_history.back().second) << " at t = " << s.t << "\n";
        return 0;
    }
    const KernelFile k = sa.kernel();
    const IdeProblem p{k.xi, k.kernel};
    Profile hist = [](double t) { return std::sin(std::numbers::pi * t); };
    if (zero) hist = [](double) { return 0.0; };
    const IdeTrace tr = dt > 0 ? simulate_ide(p, hist, horizon, dt) : simulate_ide_steps(p, hist, horizon, steps);
    std::ostringstream csv;
    write_ide_trace_csv(csv, tr, stride);
    write_file(dir / "ide_trace.csv", csv.str());
    write_file(dir / "ide_trace.json", ide_metadata_json(tr).dump(2) + "\n");
    write_file(dir / "ide_trace.gp", gnuplot_script("ide_trace.csv", "IDE trace", "z(t)", false));
    std::cout << "ide: " << to_string(tr.classification) << ", last window sup "
              << fmt("%.6e", tr.window_sup.empty() ? 0.0 : tr.window_sup.back()) << "\n";
    return 0;
}

int cmd_truncate(const SystemArgs& sa, const TolArgs& ta, int order, int find_max, const std::string& kernel_out) {
    const HyperbolicSystem sys = sa.system();
    const DerivedConstants c = derive_constants(sys);
    const CharFn exact(c.xi, KernelSpec::closed_form(c), ta.qc);
    Json j;
    j["system"] = system_to_json(sys);
    if (find_max >= 0) {
        const auto cert = smallest_certificate(exact, find_max, ta.cfg);
        j["search_max_order"] = find_max;
        j["certificate"] = cert ? certificate_to_json(*cert) : Json(nullptr);
        std::cout << j.dump(2) << "\n";
        return cert ? 0 : 2;
    }
    const KernelFile kf{truncate(c, order), c.xi, sys};
    const CharFn fp(c.xi, kf.kernel, ta.qc);
    j["order"] = order;
    j["kernel"] = kernel_to_json(kf);
    j["integral"] = fp.kernel_integral();
    j["integral_exact"] = exact.kernel_integral();
    j["l1_gap"] = l1_distance(exact.kernel(), kf.kernel, ta.qc);
    j["necessary_test"] = to_string(necessary_test(fp, ta.cfg).outcome);
    j["verdict"] = to_string(analyze(fp, ta.cfg).verdict.kind);
    const bool closed_forms_apply = std::abs(c.xi) < 1.0 && fp.delta_at_zero() > 0.0;
    if (order == 0 && closed_forms_apply) j["p0_candidates"] = p0_to_json(p0_imaginary_candidates(kf.kernel, c.xi));
    if (order == 1 && closed_forms_apply) j["p1_tests"] = p1_to_json(p1_imaginary_tests(kf.kernel, c.xi));
    j["certificate"] = certificate_to_json(truncation_certificate(exact, order, ta.cfg));
    if (!kernel_out.empty()) write_file(kernel_out, kernel_to_json(kf).dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_mplot(const SystemArgs& sa, const TolArgs& ta, double omega_max, int points, const std::string& out_dir) {
    const KernelFile k = sa.kernel();
    const CharFn f(k.xi, k.kernel, ta.qc);
    if (!(omega_max > 0.0)) omega_max = frequency_window(f, ta.cfg).omega_max;
    std::ostringstream csv;
    csv << "omega,M,S\n";
    for (int i = 0; i <= points; ++i) {
        const double w = omega_max * i / points;
        csv << format_double(w) << ',' << format_double(f.M(w)) << ',' << format_double(f.S(w)) << '\n';
    }
    const fs::path dir(out_dir);
    write_file(dir / "mplot.csv", csv.str());
    write_file(dir / "mplot.gp",
               "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'omega'\n"
               "set zeroaxis\nplot 'mplot.csv' using 1:2 with lines, '' using 1:3 with lines\n");
    std::cout << "wrote " << (dir / "mplot.csv").string() << " (" << points + 1 << " points up to omega = "
              << omega_max << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability analysis of coupled hyperbolic systems through their integral difference equation"};
    app.require_subcommand(1);

    SystemArgs sa;
    TolArgs ta;

    auto* analyze_cmd = app.add_subcommand("analyze", "verdict from the zeros of M and the counting formula");
    sa.attach(analyze_cmd);
    ta.attach(analyze_cmd);
    std::string json_path;
    bool json_stdout = false;
    analyze_cmd->add_option("--json-out", json_path, "write the full report as JSON");
    analyze_cmd->add_flag("--json", json_stdout, "print the JSON report instead of the summary");

    auto* roots_cmd = app.add_subcommand("roots", "locate the roots of Delta in a rectangle");
    sa.attach(roots_cmd);
    ta.attach(roots_cmd);
    SearchRect rect{-5.0, 5.0, -20.0, 20.0};
    bool rhp = false;
    std::string roots_out;
    roots_cmd->add_option("--re-min", rect.re_min)->capture_default_str();
    roots_cmd->add_option("--re-max", rect.re_max)->capture_default_str();
    roots_cmd->add_option("--im-min", rect.im_min)->capture_default_str();
    roots_cmd->add_option("--im-max", rect.im_max)->capture_default_str();
    roots_cmd->add_flag("--rhp", rhp, "search the right half-plane rectangle that holds every unstable root");
    roots_cmd->add_option("-o,--out", roots_out, "CSV output (default stdout)");

    auto* compare_cmd = app.add_subcommand("compare", "criteria table for a CSV of parameter rows");
    std::string table_path, csv_out, json_out;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    compare_cmd->add_option("table", table_path, "CSV with sigma_plus,sigma_minus,inv_lambda,inv_mu,rho,q")
        ->required();
    compare_cmd->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    compare_cmd->add_option("--csv-out", csv_out, "CSV output (default stdout)");
    compare_cmd->add_option("--json-out", json_out, "JSON output");
    ta.attach(compare_cmd);

    auto* sim_cmd = app.add_subcommand("simulate", "time-domain simulation of the IDE or the PDE");
    std::string mode;
    double horizon = 60.0, dt = 0.0;
    int steps = 128, stride = 0;
    std::string sim_dir = "out";
    bool zero = false;
    sim_cmd->add_option("mode", mode, "ide or pde")->required()->check(CLI::IsMember({"ide", "pde"}));
    sa.attach(sim_cmd);
    sim_cmd->add_option("-T,--horizon", horizon, "final time")->check(CLI::PositiveNumber)->capture_default_str();
    sim_cmd->add_option("--dt", dt, "time step (pde default 1e-4; ide: must be tau / n)");
    sim_cmd->add_option("--steps-per-delay", steps, "ide grid points per delay when --dt is absent")
        ->check(CLI::Range(64, 1 << 20))->capture_default_str();
    sim_cmd->add_option("--stride", stride, "output every this many steps (pde default 100)");
    sim_cmd->add_option("-o,--out-dir", sim_dir, "output directory")->capture_default_str();
    sim_cmd->add_flag("--zero", zero, "zero initial data");

    auto* trunc_cmd = app.add_subcommand("truncate", "truncated kernel N_p with its diagnostics and certificate");
    SystemArgs tsa;
    tsa.attach(trunc_cmd, false);
    ta.attach(trunc_cmd);
    int order = 0, find_max = -1;
    std::string kernel_out;
    trunc_cmd->add_option("-p,--order", order, "truncation order")->check(CLI::Range(0, kMaxTruncationOrder));
    trunc_cmd->add_option("--find-p0", find_max, "search the smallest certifying order up to this value")
        ->check(CLI::Range(0, kMaxTruncationOrder));
    trunc_cmd->add_option("--kernel-out", kernel_out, "write the kernel JSON here");

    auto* mplot_cmd = app.add_subcommand("mplot", "M and S on the imaginary axis as CSV with a gnuplot script");
    sa.attach(mplot_cmd);
    ta.attach(mplot_cmd);
    double omega_max = 0.0;
    int points = 2000;
    std::string mplot_dir = "out";
    mplot_cmd->add_option("--omega-max", omega_max, "upper frequency (default: the frequency window)");
    mplot_cmd->add_option("--points", points)->check(CLI::PositiveNumber)->capture_default_str();
    mplot_cmd->add_option("-o,--out-dir", mplot_dir)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(sa, ta, json_path, json_stdout);
        if (*roots_cmd) return cmd_roots(sa, ta, rect, rhp, roots_out);
        if (*compare_cmd) return cmd_compare(table_path, jobs, csv_out, json_out, ta);
        if (*sim_cmd) {
            if (stride <= 0) stride = mode == "pde" ? 100 : 1;
            return cmd_simulate(mode, sa, horizon, dt, steps, stride, sim_dir, zero);
        }
        if (*trunc_cmd) return cmd_truncate(tsa, ta, order, find_max, kernel_out);
        if (*mplot_cmd) return cmd_mplot(sa, ta, omega_max, points, mplot_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.field() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSoftware;
    }
    return kExitUsage;
}
