#include "factored.hpp"

#include <cmath>
#include <limits>

namespace qjensen {

namespace {

Quaternion integer_power(const Quaternion& base, int n) {
    if (n == 0) return Quaternion(1.0);
    Quaternion b = n > 0 ? base : inverse(base);
    int e = n > 0 ? n : -n;
    Quaternion acc(1.0);
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

} // namespace

double sphere_bracket(const Quaternion& a) {
    const double tr = 2.0 * a.re();
    return 2.0 * a.norm_sq() - tr * tr;
}

double sphere_factor_laplacian_log_at_zero(const Quaternion& q) {
    const double n2 = q.norm_sq();
    return -2.0 / (n2 * n2) * sphere_bracket(q);
}

FactoredSlicePreserving::FactoredSlicePreserving(int monomial_power,
                                                 std::vector<RealFactor> real_factors,
                                                 std::vector<SphereFactor> sphere_factors,
                                                 std::optional<RealCoeffSeries> tail)
    : monomial_power_(monomial_power),
      real_factors_(std::move(real_factors)),
      sphere_factors_(std::move(sphere_factors)),
      tail_(std::move(tail)) {
    for (const auto& rf : real_factors_) {
        if (rf.point == 0.0) throw DomainError("real factor at 0; use monomial_power");
        if (rf.multiplicity == 0) throw DomainError("real factor with zero multiplicity");
    }
    for (const auto& sf : sphere_factors_) {
        if (sf.point.im().is_zero()) throw DomainError("sphere factor needs Im(q) != 0");
        if (sf.multiplicity == 0) throw DomainError("sphere factor with zero multiplicity");
    }
    if (tail_) {
        bool all_zero = true;
        for (double c : tail_->coefficients) all_zero = all_zero && c == 0.0;
        if (tail_->coefficients.empty() || all_zero)
            throw DomainError("tail series is identically zero");
        // Coarse zero-free sampling; a warning, not an error (caller asserts).
        double min_mod = std::numeric_limits<double>::infinity();
        const double r = std::min(tail_->radius_hint, 1e3);
        for (int n = 0; n <= 32; ++n) {
            const double t = r * n / 32.0;
            min_mod = std::min({min_mod, std::abs(tail_->eval_real(t)),
                                std::abs(tail_->eval_real(-t)),
                                tail_->eval(Quaternion(0, t, 0, 0)).norm()});
        }
        tail_warning_ = min_mod < 1e-9;
    }
    rebuild_ledger();
}

void FactoredSlicePreserving::rebuild_ledger() {
    ledger_.entries.clear();
    ledger_.origin_zero_or_pole = monomial_power_ != 0;
    ledger_.origin_order = monomial_power_;
    for (const auto& rf : real_factors_) {
        LedgerEntry e;
        e.kind = LedgerEntry::Kind::RealPoint;
        e.representative = Quaternion(rf.point);
        e.multiplicity = rf.multiplicity;
        ledger_.entries.push_back(e);
    }
    for (const auto& sf : sphere_factors_) {
        LedgerEntry e;
        e.kind = LedgerEntry::Kind::Sphere;
        e.representative = sf.point;
        e.alpha = sf.point.re();
        e.beta = sf.point.im_norm();
        e.multiplicity = sf.multiplicity;
        ledger_.entries.push_back(e);
    }
}

EvalResult FactoredSlicePreserving::eval(const Quaternion& x) const {
    // Slice-preserving factors commute pointwise. First classify vanishing
    // factors so a shared zero/pole locus is reported, never cancelled.
    bool zero_hit = false, pole_hit = false;
    auto note_hit = [&](int mult) { (mult > 0 ? zero_hit : pole_hit) = true; };
    if (monomial_power_ != 0 && x.is_zero()) note_hit(monomial_power_);
    for (const auto& rf : real_factors_)
        if ((x - rf.point).is_zero()) note_hit(rf.multiplicity);
    for (const auto& sf : sphere_factors_)
        if (characteristic_polynomial(sf.point).eval(x).is_zero()) note_hit(sf.multiplicity);
    if (zero_hit && pole_hit)
        return EvalResult::ambiguous("point lies on both a zero and a pole factor");
    if (pole_hit) return EvalResult::pole("pole factor vanishes");
    if (zero_hit) return EvalResult::finite(Quaternion{});

    Quaternion acc(1.0);
    if (monomial_power_ != 0) acc = acc * integer_power(x, monomial_power_);
    for (const auto& rf : real_factors_) acc = acc * integer_power(x - rf.point, rf.multiplicity);
    for (const auto& sf : sphere_factors_)
        acc = acc * integer_power(characteristic_polynomial(sf.point).eval(x), sf.multiplicity);
    if (tail_) acc = acc * tail_->eval(x);
    return EvalResult::finite(acc);
}

double FactoredSlicePreserving::log_abs(const Quaternion& x) const {
    double s = 0.0;
    if (monomial_power_ != 0) s += monomial_power_ * std::log(x.norm());
    for (const auto& rf : real_factors_) s += rf.multiplicity * std::log((x - rf.point).norm());
    for (const auto& sf : sphere_factors_)
        s += sf.multiplicity * std::log(characteristic_polynomial(sf.point).eval(x).norm());
    if (tail_) s += std::log(tail_->eval(x).norm());
    return s;
}

double FactoredSlicePreserving::laplacian_log_at_zero_closed(bool* has_tail) const {
    double s = 0.0;
    for (const auto& rf : real_factors_) s += rf.multiplicity * 2.0 / (rf.point * rf.point);
    for (const auto& sf : sphere_factors_)
        s += sf.multiplicity * sphere_factor_laplacian_log_at_zero(sf.point);
    if (has_tail) *has_tail = tail_.has_value();
    return s;
}

FactoredSlicePreserving FactoredSlicePreserving::product(const FactoredSlicePreserving& a,
                                                         const FactoredSlicePreserving& b) {
    if (a.tail_ && b.tail_) throw DomainError("product of two tailed factored functions");
    auto rf = a.real_factors_;
    rf.insert(rf.end(), b.real_factors_.begin(), b.real_factors_.end());
    auto sf = a.sphere_factors_;
    sf.insert(sf.end(), b.sphere_factors_.begin(), b.sphere_factors_.end());
    auto tail = a.tail_ ? a.tail_ : b.tail_;
    return FactoredSlicePreserving(a.monomial_power_ + b.monomial_power_, std::move(rf),
                                   std::move(sf), std::move(tail));
}

} // namespace qjensen
