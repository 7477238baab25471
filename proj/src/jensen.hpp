#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "blaschke.hpp"
#include "diffops.hpp"
#include "factored.hpp"
#include "pql.hpp"
#include "quadrature.hpp"

namespace qjensen {

// Routing signals: the plain engine refuses inputs that belong to the
// origin/boundary corollaries and says which.
struct BoundaryContact : DomainError {
    using DomainError::DomainError;
};
struct OriginSingular : DomainError {
    using DomainError::DomainError;
};
struct PreconditionFailed : DomainError {
    using DomainError::DomainError;
};
struct ExtrapolationUnstable : DomainError {
    using DomainError::DomainError;
};

struct JensenCorrection {
    std::string source;  // e.g. "sphere zero alpha=0 beta=1 (mult 1)"
    std::string branch;  // "real" | "spherical" | "pql"
    double value = 0.0;  // signed contribution to the corrections sum
};

struct JensenMetadata {
    GridSpec grid;
    double fd_h = 0.0;
    int richardson_levels = 0;
    std::uint64_t seed = 0;
    std::string laplacian_path;  // "closed-form" or "closed-form+fd-tail"
    int rotations_tried = 0;
    double min_node_clearance = -1.0;
    bool boundary_extrapolation = false;
    std::vector<double> extrapolation_radii;
    std::vector<double> extrapolation_means;
    bool cone_reduction = false;
    std::string multiplicity_convention =
        "corrections use factor (ledger) multiplicities; spherical total multiplicity is 2n";
    std::string notes;
};

/// Both sides of a Jensen identity with the per-term breakdown. The residual
/// is always reported, never thresholded silently:
///   residual = lhs - (mean_term - laplacian_term + sum corrections).
struct JensenReport {
    double rho = 0.0;
    double lhs = 0.0;
    bool origin_adjusted = false;
    int origin_k = 0;
    double log_f1_at_zero = 0.0;
    double mean_term = 0.0;
    double laplacian_term = 0.0;  // (rho^2/8) Delta log|f|(0)
    std::vector<JensenCorrection> corrections;
    double corrections_sum = 0.0;
    double residual = 0.0;
    JensenMetadata metadata;
};

struct JensenOptions {
    GridSpec grid{48, 48, 96};
    FDConfig fd{};
    std::uint64_t seed = 0;
    double boundary_delta = 1e-9;
};

JensenReport jensen_terms_slice_preserving(const FactoredSlicePreserving& f, double rho,
                                           const JensenOptions& opts = {});
JensenReport jensen_terms_pql(const PQLFunction& f, double rho, const JensenOptions& opts = {});
JensenReport jensen_mixed(const std::vector<MixedPart>& parts, double rho,
                          const JensenOptions& opts = {});

/// f = x^k f_1 with f_1(0) != 0, inf: lhs becomes k log rho + log|f_1(0)|.
JensenReport origin_case(const FactoredSlicePreserving& f, double rho,
                         const JensenOptions& opts = {});
JensenReport origin_case(const PQLFunction& f, double rho, const JensenOptions& opts = {});

/// Zeros/poles on the boundary sphere contribute nothing; the mean is
/// Richardson-extrapolated from radii rho(1+eps), eps in {4e-3, 2e-3, 1e-3}.
JensenReport boundary_case(const FactoredSlicePreserving& f, double rho,
                           const JensenOptions& opts = {});
JensenReport boundary_case(const PQLFunction& f, double rho, const JensenOptions& opts = {});

/// All spherical entries on the cone boundary beta = |alpha|: the bracket
/// term vanishes and spherical corrections reduce to -+ log(rho^2/|a|^2).
JensenReport cone_case_report(const FactoredSlicePreserving& f, double rho,
                              const JensenOptions& opts = {});

/// Dispatches between the plain engine and the origin/boundary corollaries.
JensenReport jensen_auto(const FactoredSlicePreserving& f, double rho,
                         const JensenOptions& opts = {});
JensenReport jensen_auto(const PQLFunction& f, double rho, const JensenOptions& opts = {});

struct ZeroCountBound {
    double bound = 0.0;
    int n_actual = 0;
    double max_modulus_at_R = 0.0;  // M(R)
    bool ineqzero_display_missing_half = true;
};

/// N(r) <= (1/2)(log M(R) - log|f(0)| - (R^2/8) Delta log|f|(0)) / (log R - log r)
/// for slice preserving regular f with all zeros in the open cone beta > |alpha|
/// (boundary included). N counts ledger (factor) multiplicities.
ZeroCountBound zero_count_bound(const FactoredSlicePreserving& f, double r, double R,
                                const JensenOptions& opts = {});

struct ZeroFreeRadius {
    double radius = 1.0;
    double guard = 0.0;  // |f^s(0)| exp((1/8) Delta log|f^s|(0))
    bool vacuous = false;
    bool ledger_consistent = true;
};

/// r < sqrt(|f^s(0)|) exp((1/16) Delta log|f^s|(0)) is zero free; when the
/// guard quantity exceeds 1 the whole unit ball qualifies (radius 1).
ZeroFreeRadius zero_free_radius(const FactoredSlicePreserving& f, const JensenOptions& opts = {});

/// Mean of log|B| over the sphere of radius r > max(|a|, rho^2/|a|):
///   punctual : log(|a|/rho) + (1/4)(rho^4-|a|^4)/(|a|^2 r^2)
///   spherical: 2 log(|a|/rho) - (1/4)((rho^4-|a|^4)/(|a|^4 r^2))(2|a|^2-(a+a^c)^2)
double blaschke_sphere_mean(const BlaschkeSpec& B, double r);

/// Mean of log|f| over the sphere of radius rho for a PQL f with all factors
/// inside: (rho^2/8) sum M_k 2/|q_k|^2 + sum log|a_h|
///         + sum M_k (log rho + (1/4)(|q_k|^4-rho^4)/(rho^2 |q_k|^2)).
double pql_sphere_mean(const PQLFunction& f, double rho);

/// Per-entry Jensen correction at radius rho (inside entries only), exposed
/// for the separability property and the report assembly.
double jensen_correction_value(const LedgerEntry& e, double rho);

} // namespace qjensen
