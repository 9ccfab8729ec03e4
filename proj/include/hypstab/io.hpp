#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypstab/criteria.hpp"
#include "hypstab/kernel.hpp"
#include "hypstab/params.hpp"
#include "hypstab/roots.hpp"
#include "hypstab/sim.hpp"
#include "hypstab/stability.hpp"

namespace hypstab {

using Json = nlohmann::ordered_json;

/// A kernel plus the delay coefficient xi of its equation.
struct KernelFile {
    KernelSpec kernel = KernelSpec::zero(1.0);
    double xi = 0.0;
    std::optional<HyperbolicSystem> system;
};

/// {"type": "closed_form" | "truncated" | "polynomial", "tau", "coeffs", "params"}.
Json kernel_to_json(const KernelFile& k);
/// Throws ParameterError on missing or inconsistent fields.
KernelFile kernel_from_json(const Json& j);
KernelFile load_kernel_file(const std::string& path);

Json system_to_json(const HyperbolicSystem& sys);
Json report_to_json(const StabilityReport& r);
Json certificate_to_json(const TruncationCertificate& c);
Json p0_to_json(const P0Candidates& c);
Json p1_to_json(const P1Tests& t);
Json criteria_to_json(const CriteriaRow& row);

struct ParameterRow {
    int line = 0;
    HyperbolicSystem system;
};

struct ParameterTable {
    std::vector<ParameterRow> rows;
    std::vector<std::string> warnings;  ///< one per skipped line
};

/// CSV with header sigma_plus,sigma_minus,inv_lambda,inv_mu,rho,q (any column order).
/// Malformed or invalid rows are skipped with a warning. An empty stream gives no rows.
ParameterTable read_parameter_table(std::istream& is);

/// Table with the three criterion columns next to the verdict and its diagnostics.
void write_criteria_csv(std::ostream& os, const std::vector<CriteriaRow>& rows);

/// t,value for every `stride`-th sample.
void write_ide_trace_csv(std::ostream& os, const IdeTrace& tr, int stride = 1);
Json ide_metadata_json(const IdeTrace& tr);
void write_l2_history_csv(std::ostream& os, const PdeState& s);
Json pde_metadata_json(const HyperbolicSystem& sys, const PdeState& s);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace hypstab
