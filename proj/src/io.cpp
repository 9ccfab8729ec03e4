#include "hypstab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hypstab/errors.hpp"

namespace hypstab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

// Input parameters round-trip through reciprocals; 12 digits hide the noise.
std::string short_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

Json constants_to_json(const DerivedConstants& c) {
    return {{"tau", c.tau}, {"xi", c.xi}, {"a", c.a}, {"R", c.R}, {"b", c.b}};
}

double need(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ParameterError(key, "kernel file: " + where + " needs numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

std::optional<HyperbolicSystem> system_from(const Json& p) {
    if (!p.contains("sigma_plus")) return std::nullopt;
    HyperbolicSystem s;
    s.sigma_plus = need(p, "sigma_plus", "params");
    s.sigma_minus = need(p, "sigma_minus", "params");
    if (p.contains("inv_lambda")) {
        s.lambda = 1.0 / need(p, "inv_lambda", "params");
        s.mu = 1.0 / need(p, "inv_mu", "params");
    } else {
        s.lambda = need(p, "lambda", "params");
        s.mu = need(p, "mu", "params");
    }
    s.rho = need(p, "rho", "params");
    s.q = need(p, "q", "params");
    return s;
}

}  // namespace

Json system_to_json(const HyperbolicSystem& sys) {
    return {{"sigma_plus", sys.sigma_plus}, {"sigma_minus", sys.sigma_minus},
            {"lambda", sys.lambda},         {"mu", sys.mu},
            {"rho", sys.rho},               {"q", sys.q}};
}

Json kernel_to_json(const KernelFile& k) {
    Json j;
    j["type"] = to_string(k.kernel.kind());
    j["tau"] = k.kernel.tau();
    Json coeffs = Json::array();
    if (const Polynomial* p = k.kernel.polynomial()) {
        for (int i = 0; i <= p->degree(); ++i) coeffs.push_back((*p)[i]);
    }
    j["coeffs"] = coeffs;
    Json params = Json::object();
    params["xi"] = k.xi;
    if (const DerivedConstants* c = k.kernel.constants()) {
        params["a"] = c->a;
        params["R"] = c->R;
    }
    if (k.kernel.truncation_order() >= 0) params["order"] = k.kernel.truncation_order();
    if (k.system) {
        const Json sys = system_to_json(*k.system);
        for (const auto& [key, value] : sys.items()) params[key] = value;
    }
    j["params"] = params;
    return j;
}

KernelFile kernel_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ParameterError("type", "kernel file: missing string field 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    const Json params = j.value("params", Json::object());
    std::vector<double> coeffs;
    if (j.contains("coeffs")) {
        if (!j.at("coeffs").is_array()) throw ParameterError("coeffs", "kernel file: 'coeffs' must be an array");
        for (const auto& c : j.at("coeffs")) {
            if (!c.is_number()) throw ParameterError("coeffs", "kernel file: non-numeric coefficient");
            coeffs.push_back(c.get<double>());
        }
    }

    KernelFile out;
    out.system = system_from(params);
    if (type == "polynomial") {
        out.xi = params.contains("xi") ? need(params, "xi", "params") : 0.0;
        if (coeffs.empty()) throw ParameterError("coeffs", "kernel file: polynomial kernel needs coefficients");
        out.kernel = KernelSpec::polynomial(need(j, "tau", "kernel"), coeffs);
        return out;
    }
    if (type != "closed_form" && type != "truncated") {
        throw ParameterError("type", "kernel file: unknown kernel type '" + type + "'");
    }

    DerivedConstants c;
    if (out.system) {
        c = derive_constants(*out.system);
    } else {
        c.tau = need(j, "tau", "kernel");
        c.xi = need(params, "xi", "params");
        c.a = need(params, "a", "params");
        c.R = need(params, "R", "params");
        c.b = 1.0 + c.xi;
    }
    if (j.contains("tau") && std::abs(need(j, "tau", "kernel") - c.tau) > 1e-12 * c.tau) {
        throw ParameterError("tau", "kernel file: tau disagrees with the system parameters");
    }
    out.xi = c.xi;
    if (type == "closed_form") {
        out.kernel = KernelSpec::closed_form(c);
        return out;
    }
    if (!params.contains("order") || !params.at("order").is_number_integer()) {
        throw ParameterError("order", "kernel file: truncated kernel needs integer params.order");
    }
    const int order = params.at("order").get<int>();
    out.kernel = coeffs.empty() ? truncate(c, order) : KernelSpec::truncated(order, c, coeffs);
    return out;
}

KernelFile load_kernel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("kernel", "cannot open kernel file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError("kernel", std::string("kernel file is not valid JSON: ") + e.what());
    }
    return kernel_from_json(j);
}

Json report_to_json(const StabilityReport& r) {
    Json j;
    j["verdict"] = to_string(r.verdict.kind);
    j["reason"] = r.verdict.reason;
    j["unstable_count"] = r.verdict.unstable_count ? Json(*r.verdict.unstable_count) : Json(nullptr);
    j["tau"] = r.tau;
    j["xi"] = r.xi;
    j["kernel"] = r.kernel_kind;
    j["kernel_integral"] = r.kernel_integral;
    j["kernel_l1"] = r.kernel_l1;
    j["delta_at_zero"] = r.delta_at_zero;
    j["integral_condition_holds"] = r.integral_condition_holds;
    j["principal_part_stable"] = r.principal_part_ok;
    if (r.window) {
        j["window"] = {{"omega_max", r.window->omega_max},
                       {"tail_constant", r.window->tail_constant},
                       {"floor", r.window->floor},
                       {"m_lipschitz", r.window->m_lipschitz},
                       {"m_curvature", r.window->m_curvature}};
    } else {
        j["window"] = nullptr;
    }
    Json zeros = Json::array();
    for (const auto& z : r.m_zeros) {
        zeros.push_back({{"omega", z.omega}, {"multiplicity", z.multiplicity}, {"S", z.s_value}});
    }
    j["m_zeros"] = zeros;
    j["gamma"] = r.gamma ? Json(*r.gamma) : Json(nullptr);
    j["imaginary_roots"] = r.imaginary_roots;
    j["provenance"] = {
        {"scan_step", r.scan_step},
        {"m_evaluations", r.m_evaluations},
        {"tolerances",
         {{"boundary_tol", r.config.boundary_tol},
          {"imag_root_rel_tol", r.config.imag_root_rel_tol},
          {"tangential_tol", r.config.tangential_tol},
          {"polish_tol", r.config.polish_tol},
          {"window_safety", r.config.window_safety},
          {"min_cell", r.config.min_cell},
          {"grid_refine", r.config.grid_refine}}},
        {"quadrature",
         {{"base_nodes", r.quadrature.base_nodes},
          {"max_doublings", r.quadrature.max_doublings},
          {"rel_tol", r.quadrature.rel_tol}}}};
    return j;
}

Json certificate_to_json(const TruncationCertificate& c) {
    return {{"p0", c.p0},
            {"certified", c.certified},
            {"epsilon0", num(c.epsilon0)},
            {"l1_gap", c.l1_gap},
            {"boundary_min", num(c.boundary_min)},
            {"argmin_omega", c.argmin_omega},
            {"interior_bound_from_boundary", c.interior_bound_from_boundary},
            {"reason", c.reason},
            {"truncated_verdict", to_string(c.truncated_report.verdict.kind)}};
}

Json p0_to_json(const P0Candidates& c) {
    return {{"A", c.A},
            {"B0", c.B0},
            {"D", c.D},
            {"delta_at_zero", c.delta_at_zero},
            {"omegas", c.omegas},
            {"residuals", c.residuals}};
}

Json p1_to_json(const P1Tests& t) {
    return {{"A", t.A},
            {"B", t.B},
            {"C", t.C},
            {"E", t.E},
            {"discriminant", t.delta},
            {"Q", t.Q},
            {"delta_at_zero", t.delta_at_zero},
            {"at_most_two", t.at_most_two},
            {"Q_nonnegative", t.none},
            {"omegas", t.omegas},
            {"residuals", t.residuals}};
}

Json criteria_to_json(const CriteriaRow& row) {
    Json j;
    j["system"] = system_to_json(row.system);
    j["constants"] = constants_to_json(row.constants);
    j["corollary"] = to_string(row.corollary);
    j["verdict"] = to_string(row.report.verdict.kind);
    j["bastin_coron"] = {{"status", row.bastin.satisfied ? "satisfied" : "not_satisfied"},
                         {"ratio", row.bastin.ratio ? Json(*row.bastin.ratio) : Json(nullptr)},
                         {"r", row.bastin.r},
                         {"norm", row.bastin.norm},
                         {"note", row.bastin.note}};
    j["saba"] = {{"status", row.saba.satisfied ? "satisfied" : "not_satisfied"},
                 {"case", row.saba.case_index},
                 {"lhs", row.saba.lhs},
                 {"rhs", row.saba.rhs},
                 {"boundary_case", row.saba.boundary_case}};
    j["iss"] = {{"status", row.iss.satisfied ? "satisfied" : "not_satisfied"},
                {"witness_k", row.iss.witness_k ? Json(*row.iss.witness_k) : Json(nullptr)},
                {"best_k", row.iss.best_k},
                {"best_value", num(row.iss.best_value)},
                {"feasible", row.iss.feasible}};
    j["report"] = report_to_json(row.report);
    return j;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_number(const std::string& s, double& x) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(x);
}

}  // namespace

ParameterTable read_parameter_table(std::istream& is) {
    static const std::vector<std::string> kColumns{"sigma_plus", "sigma_minus", "inv_lambda",
                                                   "inv_mu",     "rho",         "q"};
    ParameterTable out;
    std::string line;
    int lineno = 0;
    std::map<std::string, int> index;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split_csv(t);
        if (index.empty()) {
            for (std::size_t i = 0; i < cells.size(); ++i) index[cells[i]] = static_cast<int>(i);
            for (const auto& c : kColumns) {
                if (!index.count(c)) throw ParameterError(c, "parameter table header lacks column " + c);
            }
            continue;
        }
        double v[6];
        bool ok = true;
        for (int k = 0; k < 6 && ok; ++k) {
            const int col = index[kColumns[k]];
            ok = col < static_cast<int>(cells.size()) && parse_number(cells[col], v[k]);
        }
        if (!ok) {
            out.warnings.push_back("line " + std::to_string(lineno) + ": malformed row skipped");
            continue;
        }
        if (!(v[2] > 0.0) || !(v[3] > 0.0)) {
            out.warnings.push_back("line " + std::to_string(lineno) + ": transport times must be positive");
            continue;
        }
        const auto sys = HyperbolicSystem::from_transport_times(v[0], v[1], v[2], v[3], v[4], v[5]);
        const auto bad = validate(sys);
        if (!bad.empty()) {
            out.warnings.push_back("line " + std::to_string(lineno) + ": " + bad.front().field + ": " +
                                   bad.front().message);
            continue;
        }
        out.rows.push_back({lineno, sys});
    }
    return out;
}

void write_criteria_csv(std::ostream& os, const std::vector<CriteriaRow>& rows) {
    os << "sigma_plus,sigma_minus,inv_lambda,inv_mu,rho,q,corollary,bastin_coron,saba,saba_case,iss,"
          "verdict,kernel_integral,delta_at_zero,gamma\n";
    for (const auto& r : rows) {
        const auto& s = r.system;
        os << short_double(s.sigma_plus) << ',' << short_double(s.sigma_minus) << ','
           << short_double(1.0 / s.lambda) << ',' << short_double(1.0 / s.mu) << ','
           << short_double(s.rho) << ',' << short_double(s.q) << ',' << to_string(r.corollary) << ','
           << (r.bastin.satisfied ? "satisfied" : "not_satisfied") << ','
           << (r.saba.satisfied ? "satisfied" : "not_satisfied") << ',' << r.saba.case_index << ','
           << (r.iss.satisfied ? "satisfied" : "not_satisfied") << ','
           << to_string(r.report.verdict.kind) << ',' << format_double(r.report.kernel_integral) << ','
           << format_double(r.report.delta_at_zero) << ','
           << (r.report.gamma ? std::to_string(*r.report.gamma) : std::string()) << '\n';
    }
}

void write_ide_trace_csv(std::ostream& os, const IdeTrace& tr, int stride) {
    stride = std::max(stride, 1);
    os << "t,value\n";
    for (std::size_t k = 0; k < tr.z.size(); k += stride) {
        os << format_double(tr.t[k]) << ',' << format_double(tr.z[k]) << '\n';
    }
}

Json ide_metadata_json(const IdeTrace& tr) {
    return {{"scheme", "trapezoid, implicit node at nu = 0"},
            {"dt", tr.dt},
            {"steps_per_delay", tr.steps_per_delay},
            {"samples", tr.z.size()},
            {"history_sup", tr.history_sup},
            {"last_window_sup", tr.window_sup.empty() ? Json(nullptr) : num(tr.window_sup.back())},
            {"last_growth", tr.growth_indicator.empty() ? Json(nullptr) : num(tr.growth_indicator.back())},
            {"classification", to_string(tr.classification)},
            {"max_residual", tr.max_residual}};
}

void write_l2_history_csv(std::ostream& os, const PdeState& s) {
    os << "t,value\n";
    for (const auto& [t, v] : s.l2_history) os << format_double(t) << ',' << format_double(v) << '\n';
}

Json pde_metadata_json(const HyperbolicSystem& sys, const PdeState& s) {
    return {{"scheme", "first-order upwind, explicit sources"},
            {"system", system_to_json(sys)},
            {"dt", s.dt},
            {"t_final", s.t},
            {"cells_u", s.grid.cells_u},
            {"cells_v", s.grid.cells_v},
            {"dx_u", s.grid.dx_u},
            {"dx_v", s.grid.dx_v},
            {"cfl_u", s.grid.cfl_u},
            {"cfl_v", s.grid.cfl_v},
            {"grid_rule", "cells = floor(1 / (speed dt))"},
            {"l2_initial", s.l2_history.front().second},
            {"l2_final", s.l2_history.back().second}};
}

}  // namespace hypstab
