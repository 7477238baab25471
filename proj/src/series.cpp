#include "series.hpp"

#include <cmath>

namespace qjensen {

Quaternion RealCoeffSeries::eval(const Quaternion& x) const {
    // Horner; real coefficients commute with everything.
    Quaternion acc{};
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = x * acc + Quaternion(*it);
    return acc;
}

double RealCoeffSeries::eval_real(double x) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = x * acc + *it;
    return acc;
}

QuatCoeffSeries QuatCoeffSeries::from_real(const RealCoeffSeries& r) {
    QuatCoeffSeries q;
    q.radius_hint = r.radius_hint;
    q.coefficients.reserve(r.coefficients.size());
    for (double c : r.coefficients) q.coefficients.emplace_back(c, 0, 0, 0);
    return q;
}

Quaternion QuatCoeffSeries::eval(const Quaternion& x) const {
    // acc = x*acc + a_n keeps the powers of x on the left of each coefficient.
    Quaternion acc{};
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = x * acc + *it;
    return acc;
}

QuatCoeffSeries star_product(const QuatCoeffSeries& f, const QuatCoeffSeries& g) {
    QuatCoeffSeries h;
    h.radius_hint = std::min(f.radius_hint, g.radius_hint);
    if (f.coefficients.empty() || g.coefficients.empty()) return h;
    h.coefficients.assign(f.coefficients.size() + g.coefficients.size() - 1, Quaternion{});
    for (std::size_t j = 0; j < f.coefficients.size(); ++j)
        for (std::size_t k = 0; k < g.coefficients.size(); ++k)
            h.coefficients[j + k] += f.coefficients[j] * g.coefficients[k];
    return h;
}

Quaternion star_eval(const QuatCoeffSeries& f, const QuatCoeffSeries& g, const Quaternion& x) {
    const Quaternion fx = f.eval(x);
    if (fx.is_zero()) return Quaternion{};
    const Quaternion t = inverse(fx) * x * fx;
    return fx * g.eval(t);
}

QuatCoeffSeries conjugate_series(const QuatCoeffSeries& f) {
    QuatCoeffSeries h;
    h.radius_hint = f.radius_hint;
    h.coefficients.reserve(f.coefficients.size());
    for (const auto& a : f.coefficients) h.coefficients.push_back(a.conj());
    return h;
}

RealCoeffSeries symmetrize(const QuatCoeffSeries& f) {
    const QuatCoeffSeries s = star_product(conjugate_series(f), f);
    RealCoeffSeries out;
    out.radius_hint = f.radius_hint;
    out.coefficients.reserve(s.coefficients.size());
    constexpr double kImagTol = 1e-12;
    for (const auto& c : s.coefficients) {
        if (c.im().norm() > kImagTol)
            throw DomainError("symmetrize: non-real coefficient beyond tolerance");
        out.coefficients.push_back(c.re());
    }
    return out;
}

RealCoeffSeries characteristic_polynomial(const Quaternion& q) {
    return RealCoeffSeries({q.norm_sq(), -2.0 * q.re(), 1.0});
}

Quaternion spherical_derivative(const Evaluator& f, const Quaternion& x) {
    const Quaternion im = x.im();
    if (im.is_zero()) throw DomainError("spherical derivative undefined at real points");
    return inverse(im) * (f(x) - f(x.conj())) * 0.5;
}

Quaternion spherical_value(const Evaluator& f, const Quaternion& x) {
    return (f(x) + f(x.conj())) * 0.5;
}

QuatCoeffSeries slice_derivative_series(const QuatCoeffSeries& f) {
    QuatCoeffSeries d;
    d.radius_hint = f.radius_hint;
    if (f.coefficients.size() <= 1) {
        d.coefficients.assign(1, Quaternion{});
        return d;
    }
    d.coefficients.reserve(f.coefficients.size() - 1);
    for (std::size_t n = 1; n < f.coefficients.size(); ++n)
        d.coefficients.push_back(f.coefficients[n] * static_cast<double>(n));
    return d;
}

Quaternion slice_derivative(const QuatCoeffSeries& f, const Quaternion& x, SliceDerivative which) {
    if (which == SliceDerivative::Conjugate) return Quaternion{};  // series are regular
    return slice_derivative_series(f).eval(x);
}

} // namespace qjensen
