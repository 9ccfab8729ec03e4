#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypstab/charfn.hpp"

namespace hypstab {

enum class VerdictKind { Stable, Unstable, MarginalImaginaryRoot, Inconclusive };

const char* to_string(VerdictKind v);

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    /// Number of roots with positive real part when known (Gamma), otherwise empty.
    std::optional<int> unstable_count;
    std::string reason;
};

struct StabilityConfig {
    double boundary_tol = 1e-10;       ///< |Delta(0)| at or below this is a root at the origin
    double imag_root_rel_tol = 1e-8;   ///< |S(rho_j)| < tol * scale flags an imaginary root
    double tangential_tol = 1e-9;      ///< |M| at a critical point below this is a double zero
    double polish_tol = 1e-11;         ///< bracket width for polished zeros of M
    double window_safety = 2.0;
    double min_cell = 1e-7;            ///< smallest scan cell before giving up on refinement
    int grid_refine = 1;               ///< divides the base scan step
};

/// Frequency beyond which M(omega) >= (1 - |xi|) / 2 > 0.
struct FrequencyWindow {
    double omega_max = 0.0;
    double tail_constant = 0.0;  ///< |N(0)| + |N(tau)| + ||N'||_L1
    double floor = 0.0;          ///< 4 pi / tau
    double m_lipschitz = 0.0;    ///< bound on |M'|: tau |xi| + int nu |N|
    double m_curvature = 0.0;    ///< bound on |M''|: tau^2 |xi| + int nu^2 |N|
};

/// Positive zero of M. multiplicity is 1 for a sign change and 2 for a tangential zero.
struct MZero {
    double omega = 0.0;
    int multiplicity = 1;
    double s_value = 0.0;  ///< S(omega)
};

struct MZeroScan {
    std::vector<MZero> zeros;  ///< decreasing omega
    bool inconclusive = false;
    std::string reason;
    long evaluations = 0;
    double base_step = 0.0;
};

enum class NecessaryOutcome { Pass, FailAtZero, Boundary };

const char* to_string(NecessaryOutcome n);

struct NecessaryTest {
    NecessaryOutcome outcome = NecessaryOutcome::Pass;
    double delta_at_zero = 0.0;
};

struct StabilityReport {
    double tau = 0.0;
    double xi = 0.0;
    std::string kernel_kind;
    double kernel_integral = 0.0;
    double kernel_l1 = 0.0;
    double delta_at_zero = 0.0;
    bool integral_condition_holds = false;
    bool principal_part_ok = false;
    std::optional<FrequencyWindow> window;
    std::vector<MZero> m_zeros;
    std::optional<int> gamma;
    std::vector<double> imaginary_roots;  ///< symmetric: each omega != 0 appears with -omega
    Verdict verdict;
    long m_evaluations = 0;
    double scan_step = 0.0;
    StabilityConfig config;
    QuadratureConfig quadrature;
};

NecessaryTest necessary_test(const CharFn& f, const StabilityConfig& cfg = {});

/// Throws DomainError when |xi| >= 1.
FrequencyWindow frequency_window(const CharFn& f, const StabilityConfig& cfg = {});

MZeroScan find_m_zeros(const CharFn& f, const FrequencyWindow& w, const StabilityConfig& cfg = {});

/// Alternating sum over zeros sorted by decreasing omega, each repeated by multiplicity.
/// Throws ImaginaryAxisRootError if some |S(rho_j)| < imag_tol.
int gamma_count(std::vector<MZero> zeros, double imag_tol);

StabilityReport analyze(const CharFn& f, const StabilityConfig& cfg = {});

// ---------------------------------------------------------------------------------------------
// Closed-form imaginary-root analysis for low-order truncations.

/// Polynomial G with |P0num(i w)|^2 - |P1num(i w)|^2 = G(w^2). Real roots x > 0 of G give the
/// only frequencies where Delta_p may vanish on the imaginary axis.
Polynomial modulus_gap_polynomial(const QuasiPolyForm& qp);

struct P0Candidates {
    double A = 0.0;   ///< 1 - xi^2
    double B0 = 0.0;  ///< a0^2 + 2 a1 - N0(tau)^2 - 2 xi N0'(tau)
    double D = 0.0;   ///< B0^2 + 48 a3 A Delta0(0)
    double delta_at_zero = 0.0;
    std::vector<double> omegas;     ///< +-omega pairs, ascending
    std::vector<double> residuals;  ///< |Delta0(i omega)| for each entry of omegas
};

/// Needs a truncation of order 0 with Delta0(0) > 0 and |xi| < 1 (DomainError otherwise).
P0Candidates p0_imaginary_candidates(const KernelSpec& k, double xi);

struct P1Tests {
    double A = 0.0, B = 0.0, C = 0.0, E = 0.0;
    double delta = 0.0;  ///< cubic discriminant
    double Q = 0.0;
    double delta_at_zero = 0.0;
    bool at_most_two = false;  ///< delta < 0
    bool none = false;         ///< Q >= 0
    std::vector<double> omegas;  ///< +-sqrt of positive cubic roots, ascending
    std::vector<double> residuals;
};

/// Needs a truncation of order 1 with Delta1(0) > 0 and |xi| < 1 (DomainError otherwise).
P1Tests p1_imaginary_tests(const KernelSpec& k, double xi);

// ---------------------------------------------------------------------------------------------

struct TruncationCertificate {
    int p0 = 0;
    bool certified = false;
    double epsilon0 = 0.0;    ///< lower bound of |Delta_p0| on the closed right half-plane
    double l1_gap = 0.0;      ///< ||N - N_p0||_L1
    double boundary_min = 0.0;  ///< smallest sampled |Delta_p0(i omega)|
    double argmin_omega = 0.0;
    bool interior_bound_from_boundary = true;
    std::string reason;
    StabilityReport truncated_report;
};

/// Checks inf_{Re s >= 0} |Delta_p0| > eps0 > ||N - N_p0||_L1 for the truncation N_p0 of a
/// closed-form kernel. Throws VariantError if `exact` does not carry derived constants.
TruncationCertificate truncation_certificate(const CharFn& exact, int p0,
                                             const StabilityConfig& cfg = {});

/// First p in 0 .. max_p whose certificate holds.
std::optional<TruncationCertificate> smallest_certificate(const CharFn& exact, int max_p,
                                                          const StabilityConfig& cfg = {});

}  // namespace hypstab
