#pragma once

#include <optional>
#include <string>

#include "hypstab/params.hpp"
#include "hypstab/stability.hpp"

namespace hypstab {

enum class CriterionStatus { Satisfied, NotSatisfied, NotApplicable };

const char* to_string(CriterionStatus s);

/// Lyapunov condition with a diagonal weight P = diag(p1, p2).
struct BastinCoronResult {
    bool satisfied = false;
    std::optional<double> ratio;  ///< witness p1 / p2
    double r = 0.0;               ///< sqrt(p1 lambda / (p2 mu)) at the witness
    double norm = 0.0;            ///< max(|q| r, |rho| / r)
    std::string note;
};

BastinCoronResult bastin_coron(const HyperbolicSystem& sys);

/// Off-diagonal entry of M^T P + P M for P = diag(p1, p2); the matrix is PSD iff it is zero.
double bastin_coron_offdiagonal(const HyperbolicSystem& sys, double p1, double p2);
/// ||delta K delta^{-1}|| with delta = sqrt(P |Lambda|).
double bastin_coron_norm(const HyperbolicSystem& sys, double p1, double p2);

struct SabaResult {
    int case_index = 1;  ///< 1..4 by the signs of sigma+ sigma- and rho q
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
    bool boundary_case = false;  ///< sigma+ sigma- == 0, assigned to cases 1 and 2
};

SabaResult saba(const HyperbolicSystem& sys);

struct IssResult {
    bool satisfied = false;
    std::optional<double> witness_k;  ///< minimiser when satisfied
    double best_k = 0.0;
    double best_value = 0.0;  ///< minimum of the left side over admissible K
    double k_min = 1e-4;
    double k_max = 20.0;
    bool feasible = false;  ///< some grid K satisfies (|rho| + |q|) e^{-K} < 1
};

/// Small-gain condition minimised over K on a log grid plus golden-section refinement.
IssResult iss_small_gain(const HyperbolicSystem& sys, int grid_points = 400, double k_min = 1e-4,
                         double k_max = 20.0);

struct CriteriaRow {
    HyperbolicSystem system;
    DerivedConstants constants;
    StabilityReport report;
    CriterionStatus corollary = CriterionStatus::NotApplicable;
    BastinCoronResult bastin;
    SabaResult saba;
    IssResult iss;
};

CriterionStatus corollary_status(const StabilityReport& r);

CriteriaRow compare_all(const HyperbolicSystem& sys, const StabilityConfig& cfg = {},
                        const QuadratureConfig& qc = {});

}  // namespace hypstab
