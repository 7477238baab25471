#include "pql.hpp"

#include <cmath>

namespace qjensen {

PQLFunction::PQLFunction(std::vector<Quaternion> constants, std::vector<Quaternion> points,
                         std::vector<int> signs)
    : constants_(std::move(constants)), points_(std::move(points)), signs_(std::move(signs)) {
    if (constants_.size() != points_.size() + 1)
        throw DomainError("PQL needs N+1 constants for N factors");
    if (signs_.size() != points_.size()) throw DomainError("PQL needs one sign per factor");
    for (const auto& a : constants_)
        if (a.is_zero()) throw DomainError("PQL constants must be nonzero");
    for (int m : signs_)
        if (m != 1 && m != -1) throw DomainError("PQL exponents must be +-1");
    rebuild_ledger();
}

PQLFunction PQLFunction::constant(const Quaternion& a0) {
    return PQLFunction({a0}, {}, {});
}

PQLFunction PQLFunction::linear(const Quaternion& q, int sign, const Quaternion& a0,
                                const Quaternion& a1) {
    return PQLFunction({a0, a1}, {q}, {sign});
}

void PQLFunction::rebuild_ledger() {
    ledger_.entries.clear();
    ledger_.origin_zero_or_pole = false;
    ledger_.origin_order = 0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (points_[k].is_zero()) {
            ledger_.origin_zero_or_pole = true;
            ledger_.origin_order += signs_[k];
            continue;
        }
        LedgerEntry e;
        e.kind = LedgerEntry::Kind::IsolatedPoint;
        e.representative = points_[k];
        e.multiplicity = signs_[k];
        ledger_.entries.push_back(e);
    }
}

EvalResult PQLFunction::eval(const Quaternion& x) const {
    bool zero_hit = false, pole_hit = false;
    for (std::size_t k = 0; k < points_.size(); ++k)
        if ((x - points_[k]).is_zero()) (signs_[k] > 0 ? zero_hit : pole_hit) = true;
    if (zero_hit && pole_hit)
        return EvalResult::ambiguous("point is a root of both a zero and a pole factor");
    if (pole_hit) return EvalResult::pole("x equals a pole factor point");
    Quaternion acc = constants_[0];
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const Quaternion v = x - points_[k];
        acc = acc * (signs_[k] > 0 ? v : inverse(v));
        acc = acc * constants_[k + 1];
    }
    return EvalResult::finite(acc);
}

double PQLFunction::log_abs(const Quaternion& x) const {
    double s = 0.0;
    for (const auto& a : constants_) s += std::log(a.norm());
    for (std::size_t k = 0; k < points_.size(); ++k)
        s += signs_[k] * std::log((x - points_[k]).norm());
    return s;
}

double PQLFunction::laplacian_log_at_zero_closed() const {
    double s = 0.0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const double n2 = points_[k].norm_sq();
        if (n2 == 0.0) throw DomainError("PQL factor at the origin; route through origin_case");
        s += signs_[k] * 2.0 / n2;
    }
    return s;
}

PQLFunction PQLFunction::product(const PQLFunction& f, const PQLFunction& g) {
    std::vector<Quaternion> constants = f.constants_;
    // a_N of f and a_0 of g merge into one interleaved constant.
    constants.back() = constants.back() * g.constants_.front();
    constants.insert(constants.end(), g.constants_.begin() + 1, g.constants_.end());
    std::vector<Quaternion> points = f.points_;
    points.insert(points.end(), g.points_.begin(), g.points_.end());
    std::vector<int> signs = f.signs_;
    signs.insert(signs.end(), g.signs_.begin(), g.signs_.end());
    return PQLFunction(std::move(constants), std::move(points), std::move(signs));
}

PQLFunction from_mobius(const Quaternion& a, const Quaternion& b, const Quaternion& c,
                        const Quaternion& d) {
    const bool row1_zero = a.is_zero() && b.is_zero();
    const bool row2_zero = c.is_zero() && d.is_zero();
    if (row1_zero || row2_zero) throw DegenerateTransform("zero row in Moebius matrix");
    // Left-proportional rows (c,d) = lambda (a,b) make the map constant.
    if (!a.is_zero()) {
        const Quaternion lambda = c * inverse(a);
        if (dist(lambda * b, d) <= 1e-14 * (1.0 + d.norm()))
            throw DegenerateTransform("rows are left-proportional");
    } else if (c.is_zero()) {
        // a = 0, c = 0: rows (0,b), (0,d) always proportional.
        throw DegenerateTransform("rows are left-proportional");
    }

    if (!a.is_zero() && !c.is_zero()) {
        // a (x + a^{-1}b) (x + c^{-1}d)^{-1} c^{-1}
        return PQLFunction({a, Quaternion(1.0), inverse(c)},
                           {-(inverse(a) * b), -(inverse(c) * d)}, {1, -1});
    }
    if (a.is_zero()) {
        // b (cx+d)^{-1} = b (x + c^{-1}d)^{-1} c^{-1}
        return PQLFunction({b, inverse(c)}, {-(inverse(c) * d)}, {-1});
    }
    // c = 0: affine (ax+b) d^{-1} = a (x + a^{-1}b) d^{-1}
    return PQLFunction({a, inverse(d)}, {-(inverse(a) * b)}, {1});
}

} // namespace qjensen
