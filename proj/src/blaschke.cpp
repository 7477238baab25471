#include "blaschke.hpp"

#include <cmath>

namespace qjensen {

BlaschkeSpec::BlaschkeSpec(const Quaternion& a, double rho, BlaschkeKind kind)
    : a_(a), rho_(rho), kind_(kind) {
    if (!(rho > 0.0)) throw DomainError("Blaschke radius must be positive");
    if (a.is_zero()) throw DomainError("Blaschke point must be nonzero");
    if (!(a.norm() < rho)) throw DomainError("Blaschke requires |a| < rho strictly");
    if (kind == BlaschkeKind::Spherical && a.im().is_zero())
        throw DomainError("spherical Blaschke requires Im(a) != 0");
}

EvalResult BlaschkeSpec::eval(const Quaternion& x) const {
    if (kind_ == BlaschkeKind::Punctual) {
        if ((x - a_).is_zero()) return EvalResult::pole("punctual Blaschke pole at a");
        const Quaternion num = Quaternion(rho_ * rho_) - x * a_.conj();
        return EvalResult::finite(num * inverse((x - a_) * rho_));
    }
    // Spherical: both char-poly values lie in the slice of x and commute.
    const Quaternion den = characteristic_polynomial(a_).eval(x);
    if (den.is_zero()) return EvalResult::pole("spherical Blaschke pole on S_a");
    const Quaternion num = characteristic_polynomial(inverse(a_) * (rho_ * rho_)).eval(x);
    return EvalResult::finite(num * inverse(den) * (a_.norm_sq() / (rho_ * rho_)));
}

double BlaschkeSpec::log_abs(const Quaternion& x) const {
    if (kind_ == BlaschkeKind::Punctual) {
        return std::log((Quaternion(rho_ * rho_) - x * a_.conj()).norm()) -
               std::log(((x - a_) * rho_).norm());
    }
    return std::log(characteristic_polynomial(inverse(a_) * (rho_ * rho_)).eval(x).norm()) -
           std::log(characteristic_polynomial(a_).eval(x).norm()) +
           std::log(a_.norm_sq() / (rho_ * rho_));
}

ZeroPoleLedger BlaschkeSpec::ledger() const {
    if (kind_ == BlaschkeKind::Punctual) return as_pql().ledger();
    return as_factored().ledger();
}

double BlaschkeSpec::laplacian_log_at_zero() const {
    const double n2 = a_.norm_sq();
    const double r4 = rho_ * rho_ * rho_ * rho_;
    if (kind_ == BlaschkeKind::Punctual) return 2.0 / (r4 * n2) * (n2 * n2 - r4);
    return 2.0 / (r4 * n2 * n2) * (r4 - n2 * n2) * sphere_bracket(a_);
}

PQLFunction BlaschkeSpec::as_pql() const {
    if (kind_ != BlaschkeKind::Punctual)
        throw DomainError("only the punctual Blaschke factor has a PQL form");
    const Quaternion zero_at = inverse(a_.conj()) * (rho_ * rho_);
    return PQLFunction({Quaternion(1.0), -a_.conj(), Quaternion(1.0 / rho_)}, {zero_at, a_},
                       {1, -1});
}

FactoredSlicePreserving BlaschkeSpec::as_factored() const {
    if (kind_ != BlaschkeKind::Spherical)
        throw DomainError("only the spherical Blaschke factor is slice preserving");
    const Quaternion sphere_zero = inverse(a_) * (rho_ * rho_);
    return FactoredSlicePreserving(
        0, {}, {{sphere_zero, 1}, {a_, -1}},
        RealCoeffSeries({a_.norm_sq() / (rho_ * rho_)}, 1e6));
}

EvalResult eval_semiregular_blaschke(const Quaternion& a, double rho, const Quaternion& x) {
    if (!(rho > 0.0) || !(a.norm() < rho)) throw DomainError("need 0 <= |a| < rho");
    const Quaternion u = Quaternion(rho * rho) - x * a.conj();
    if (u.is_zero()) return EvalResult::finite(Quaternion{});
    const Quaternion t = inverse(u) * x * u;
    const Quaternion den = characteristic_polynomial(a).eval(t) * (rho * rho);
    if (den.is_zero()) return EvalResult::pole("pole on the sphere S_a");
    return EvalResult::finite(u * inverse(den) * ((t - a.conj()) * rho));
}

} // namespace qjensen
