#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quaternion.hpp"
#include "series.hpp"

namespace qjensen {

/// One entry of a zero/pole inventory. Spheres are stored as (alpha, beta)
/// with a representative quaternion; multiplicity is the factor multiplicity
/// (total multiplicity of a sphere of a slice-preserving function is twice it).
struct LedgerEntry {
    enum class Kind { RealPoint, Sphere, IsolatedPoint };
    Kind kind = Kind::RealPoint;
    Quaternion representative{};
    double alpha = 0.0;   // sphere center (Kind::Sphere)
    double beta = 0.0;    // sphere radius (Kind::Sphere)
    int multiplicity = 0; // signed: >0 zero, <0 pole

    double modulus() const {
        if (kind == Kind::Sphere) return std::sqrt(alpha * alpha + beta * beta);
        return representative.norm();
    }
    bool is_zero() const { return multiplicity > 0; }

    /// Euclidean distance from x to the point / sphere.
    double distance_to(const Quaternion& x) const {
        if (kind != Kind::Sphere) return dist(x, representative);
        const double da = x.re() - alpha;
        const double db = x.im_norm() - beta;
        return std::sqrt(da * da + db * db);
    }
};

struct ZeroPoleLedger {
    std::vector<LedgerEntry> entries;
    bool origin_zero_or_pole = false; // x^n monomial or PQL factor at 0
    int origin_order = 0;             // signed order at the origin

    ZeroPoleLedger filtered(double rho) const {
        ZeroPoleLedger out;
        out.origin_zero_or_pole = origin_zero_or_pole;
        out.origin_order = origin_order;
        for (const auto& e : entries)
            if (e.modulus() < rho) out.entries.push_back(e);
        return out;
    }

    std::vector<LedgerEntry> boundary_contact(double rho, double delta = 1e-9) const {
        std::vector<LedgerEntry> hits;
        for (const auto& e : entries)
            if (std::abs(e.modulus() - rho) <= delta) hits.push_back(e);
        return hits;
    }

    /// Distance from x to the nearest zero/pole locus (origin included).
    double clearance(const Quaternion& x) const {
        double d = std::numeric_limits<double>::infinity();
        if (origin_zero_or_pole) d = x.norm();
        for (const auto& e : entries) d = std::min(d, e.distance_to(x));
        return d;
    }

    int total_multiplicity(const LedgerEntry& e, bool slice_preserving) const {
        return (slice_preserving && e.kind == LedgerEntry::Kind::Sphere) ? 2 * e.multiplicity
                                                                         : e.multiplicity;
    }
};

struct RealFactor {
    double point = 0.0;   // nonzero real root
    int multiplicity = 0; // signed
};

struct SphereFactor {
    Quaternion point{};   // non-real representative q; factor ((x-q)^s)^multiplicity
    int multiplicity = 0;
};

/// x^n * prod (x-r_h)^{n_h} * prod ((x-q_k)^s)^{n_k} * tail(x), the local form
/// of a slice preserving semiregular function with explicit zero/pole data.
/// `tail` is caller-asserted zero-free on the working ball.
class FactoredSlicePreserving {
public:
    FactoredSlicePreserving() = default;
    FactoredSlicePreserving(int monomial_power, std::vector<RealFactor> real_factors,
                            std::vector<SphereFactor> sphere_factors,
                            std::optional<RealCoeffSeries> tail = std::nullopt);

    int monomial_power() const { return monomial_power_; }
    const std::vector<RealFactor>& real_factors() const { return real_factors_; }
    const std::vector<SphereFactor>& sphere_factors() const { return sphere_factors_; }
    const std::optional<RealCoeffSeries>& tail() const { return tail_; }

    EvalResult eval(const Quaternion& x) const;

    /// log|f(x)| computed as a sum of factor logs; -inf at zeros, +inf at poles.
    double log_abs(const Quaternion& x) const;

    const ZeroPoleLedger& ledger() const { return ledger_; }

    /// Laplacian of log|f| at the origin from the factor closed forms
    /// (2/r^2 per real factor, (-2/|q|^4)(2|q|^2-(q+q^c)^2) per sphere factor)
    /// plus, when requested by the caller, an externally computed tail term.
    /// The monomial factor is excluded (singular at 0).
    double laplacian_log_at_zero_closed(bool* has_tail = nullptr) const;

    bool tail_min_modulus_warning() const { return tail_warning_; }

    /// Multiplies in another factored function (used by mixed products).
    static FactoredSlicePreserving product(const FactoredSlicePreserving& a,
                                           const FactoredSlicePreserving& b);

private:
    void rebuild_ledger();

    int monomial_power_ = 0;
    std::vector<RealFactor> real_factors_;
    std::vector<SphereFactor> sphere_factors_;
    std::optional<RealCoeffSeries> tail_;
    ZeroPoleLedger ledger_;
    bool tail_warning_ = false;
};

/// Closed form for Delta log|(x-q)^s| at x = 0 per unit multiplicity.
double sphere_factor_laplacian_log_at_zero(const Quaternion& q);

/// The bracket 2|a|^2 - (a+a^c)^2 = 2(beta^2 - alpha^2) that controls the sign
/// of spherical Jensen corrections.
double sphere_bracket(const Quaternion& a);

} // namespace qjensen
