#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "factored.hpp"
#include "pql.hpp"
#include "quadrature.hpp"

namespace qjensen {

/// Normalization constant carried by the closed-form displays this library
/// implements (gamma in the reports).
inline constexpr double kGammaNominal = -48.0;
/// Total mass of Delta^2 log|x| measured by the quadrature oracles
/// (-8 pi^2; the full-space integral of the mollified family is twice this).
inline constexpr double kGammaMeasured = -78.95683520871486895;

/// Predicted gamma-normalized bilaplacian Riesz measure of log|f|: signed
/// point masses plus signed uniform sphere terms.
struct RieszPrediction {
    struct PointMass {
        Quaternion point{};
        int weight = 0;
    };
    struct SphereMass {
        double alpha = 0.0;
        double beta = 0.0;
        Quaternion representative{};
        int weight = 0;
    };
    std::vector<PointMass> point_masses;
    std::vector<SphereMass> sphere_masses;
    double gamma = kGammaNominal;

    static RieszPrediction from_ledger(const ZeroPoleLedger& ledger);
};

using RieszFunction = std::variant<FactoredSlicePreserving, PQLFunction>;

/// Auto picks the half-plane route for slice preserving inputs (their log
/// modulus is axisymmetric); Ball forces the 4D bump-centered rule, kept as
/// the independent cross-check of the adapted route.
enum class PairingRoute { Auto, Ball };

struct RieszOptions {
    BallResolution resolution{};
    double node_jitter = 1e-9;  // relative shift applied to nodes that hit exact zeros
    int s2_theta = 32;
    int s2_phi = 64;
    PairingRoute route = PairingRoute::Auto;
};

/// Adjoint pairing (1/gamma_measured) Int log|f| Delta^2 phi dx over the
/// support of phi; log|f| is locally integrable, Delta^2 phi is smooth.
double pairing(const RieszFunction& f, const BumpFunction& phi, const RieszOptions& opts = {});
double pairing(const std::vector<MixedPart>& parts, const BumpFunction& phi,
               const RieszOptions& opts = {});

/// Right-hand side of the prediction: sum w phi(q) for points plus
/// sum w Int_S phi(alpha + I beta) dsigma_S for spheres (unit-sphere measure,
/// total 4 pi).
double predicted_pairing(const RieszPrediction& pred, const BumpFunction& phi,
                         const RieszOptions& opts = {});

/// Sphere-term adjudication data recorded whenever the prediction has sphere
/// masses: the measured per-unit-dsigma_S constant next to the nominal gamma.
struct SphereConstantRecord {
    double measured = 0.0;
    double nominal = kGammaNominal;
    double sigma_integral_sum = 0.0;  // sum w Int_S phi dsigma_S
    bool agrees_with_nominal = false;
};

struct RieszCheck {
    double pairing_value = 0.0;
    double predicted = 0.0;
    double residual = 0.0;
    double gamma_nominal = kGammaNominal;
    double gamma_measured = kGammaMeasured;
    BallResolution resolution;
    std::optional<SphereConstantRecord> sphere_constant;
};

RieszCheck riesz_residual(const RieszFunction& f, const BumpFunction& phi,
                          const RieszOptions& opts = {});
RieszCheck riesz_residual_mixed(const std::vector<MixedPart>& parts, const BumpFunction& phi,
                                const RieszOptions& opts = {});

struct MollifiedDeltaRow {
    double eps = 0.0;
    double integral = 0.0;
};

/// Integrals of the mollified bilaplacian density -96 eps^4/(r^2+eps^2)^4
/// against phi (phi omitted means phi == 1, integrated over all of H).
struct MollifiedDeltaTable {
    std::vector<MollifiedDeltaRow> rows;
    double phi_at_zero = 1.0;
    double nominal_limit = 0.0;   // 2 * gamma_nominal  * phi(0) = -96 phi(0)
    double measured_limit = 0.0;  // 2 * gamma_measured * phi(0) = -16 pi^2 phi(0)
};

MollifiedDeltaTable mollified_delta_check(const std::vector<double>& eps_sequence,
                                          const BumpFunction* phi = nullptr);

} // namespace qjensen
