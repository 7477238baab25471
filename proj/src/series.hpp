#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quaternion.hpp"

namespace qjensen {

/// Outcome of evaluating a function that may have poles. A pole is a value,
/// not an error; Ambiguous marks a point that is a root of both a zero- and a
/// pole-factor of a PQL product.
struct EvalResult {
    enum class Kind { Finite, Pole, Ambiguous };
    Kind kind = Kind::Finite;
    Quaternion value{};
    std::string note;

    static EvalResult finite(const Quaternion& v) { return {Kind::Finite, v, {}}; }
    static EvalResult pole(std::string why = {}) { return {Kind::Pole, {}, std::move(why)}; }
    static EvalResult ambiguous(std::string why) { return {Kind::Ambiguous, {}, std::move(why)}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_pole() const { return kind == Kind::Pole; }
};

using Evaluator = std::function<Quaternion(const Quaternion&)>;
using RealEvaluator = std::function<double(const Quaternion&)>;

/// Power series sum_n x^n a_n with real coefficients; induces a slice-preserving function.
struct RealCoeffSeries {
    std::vector<double> coefficients;  // a_0 .. a_N
    double radius_hint = 1e3;

    RealCoeffSeries() = default;
    explicit RealCoeffSeries(std::vector<double> c, double radius = 1e3)
        : coefficients(std::move(c)), radius_hint(radius) {}

    Quaternion eval(const Quaternion& x) const;
    double eval_real(double x) const;
    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

/// Power series sum_n x^n a_n with quaternionic coefficients on the right.
struct QuatCoeffSeries {
    std::vector<Quaternion> coefficients;
    double radius_hint = 1e3;

    QuatCoeffSeries() = default;
    explicit QuatCoeffSeries(std::vector<Quaternion> c, double radius = 1e3)
        : coefficients(std::move(c)), radius_hint(radius) {}
    static QuatCoeffSeries from_real(const RealCoeffSeries& r);

    Quaternion eval(const Quaternion& x) const;
    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

/// Convolution (slice) product of coefficient series.
QuatCoeffSeries star_product(const QuatCoeffSeries& f, const QuatCoeffSeries& g);

/// (f*g)(x) = f(x) g(f(x)^{-1} x f(x)), extended by 0 at zeros of f.
Quaternion star_eval(const QuatCoeffSeries& f, const QuatCoeffSeries& g, const Quaternion& x);

/// Coefficient-wise conjugate f^c.
QuatCoeffSeries conjugate_series(const QuatCoeffSeries& f);

/// Symmetrization f^s = f^c * f. Coefficients must come out real (checked to
/// 1e-12 absolute, imaginary residue truncated).
RealCoeffSeries symmetrize(const QuatCoeffSeries& f);

/// Characteristic polynomial (x-q)^s = x^2 - x(q+q^c) + q q^c.
RealCoeffSeries characteristic_polynomial(const Quaternion& q);

/// d_s f(x) = (1/2) Im(x)^{-1} (f(x) - f(x^c)); requires Im(x) != 0.
Quaternion spherical_derivative(const Evaluator& f, const Quaternion& x);
/// v_s f(x) = (1/2)(f(x) + f(x^c)).
Quaternion spherical_value(const Evaluator& f, const Quaternion& x);

enum class SliceDerivative { Regular, Conjugate };  // d_c and dbar_c

/// Slice derivatives of a power series. dbar_c of any series is identically 0.
Quaternion slice_derivative(const QuatCoeffSeries& f, const Quaternion& x,
                            SliceDerivative which = SliceDerivative::Regular);

/// Coefficient series of d_c f, i.e. sum x^{n-1} n a_n.
QuatCoeffSeries slice_derivative_series(const QuatCoeffSeries& f);

} // namespace qjensen
