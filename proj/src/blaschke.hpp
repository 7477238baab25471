#pragma once

#include "factored.hpp"
#include "pql.hpp"
#include "quaternion.hpp"

namespace qjensen {

enum class BlaschkeKind { Punctual, Spherical };

/// rho-Blaschke factor at a (punctual PQL form) or at the sphere S_a
/// (slice preserving form). Modulus 1 on |x| = rho, > 1 inside, < 1 outside.
class BlaschkeSpec {
public:
    BlaschkeSpec(const Quaternion& a, double rho, BlaschkeKind kind);

    const Quaternion& a() const { return a_; }
    double rho() const { return rho_; }
    BlaschkeKind kind() const { return kind_; }

    EvalResult eval(const Quaternion& x) const;
    double log_abs(const Quaternion& x) const;

    /// Zero at rho^2 (a^c)^{-1} / sphere S_{rho^2 a^{-1}}, pole at a / S_a.
    ZeroPoleLedger ledger() const;

    /// Closed forms of Delta log|B|(0):
    ///   punctual: (2/(rho^4 |a|^2)) [|a|^4 - rho^4]
    ///   spherical: (2/(rho^4 |a|^4)) [rho^4 - |a|^4] (2|a|^2 - (a+a^c)^2)
    double laplacian_log_at_zero() const;

    /// Punctual factor as a PQL product (x - rho^2 (a^c)^{-1}) (-a^c) (x-a)^{-1} / rho.
    PQLFunction as_pql() const;
    /// Spherical factor as ((x - rho^2 a^{-1})^s) ((x-a)^s)^{-1} * (|a|^2/rho^2).
    FactoredSlicePreserving as_factored() const;

private:
    Quaternion a_;
    double rho_ = 1.0;
    BlaschkeKind kind_ = BlaschkeKind::Punctual;
};

/// The semiregular (non-symmetrized) factor B_{a,rho} = (rho^2 - x a^c) * (rho(x-a))^{-*},
/// evaluated pointwise through the slice reciprocal. Exposed for evaluation
/// only; it has a pole on all of S_a for non-real a.
EvalResult eval_semiregular_blaschke(const Quaternion& a, double rho, const Quaternion& x);

} // namespace qjensen
