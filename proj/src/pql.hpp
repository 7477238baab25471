#pragma once

#include <variant>
#include <vector>

#include "factored.hpp"
#include "quaternion.hpp"
#include "series.hpp"

namespace qjensen {

struct DegenerateTransform : DomainError {
    using DomainError::DomainError;
};

/// f(x) = a_0 (x-q_1)^{M_1} a_1 ... (x-q_N)^{M_N} a_N with M_k = +-1 and all
/// a_k nonzero. Factor order is preserved (the product does not commute); the
/// ledger ignores order.
class PQLFunction {
public:
    PQLFunction() : constants_(1, Quaternion(1.0)) {}
    PQLFunction(std::vector<Quaternion> constants, std::vector<Quaternion> points,
                std::vector<int> signs);

    static PQLFunction constant(const Quaternion& a0);
    /// Single factor a0 (x-q)^{sign} a1.
    static PQLFunction linear(const Quaternion& q, int sign = 1,
                              const Quaternion& a0 = Quaternion(1.0),
                              const Quaternion& a1 = Quaternion(1.0));

    std::size_t factor_count() const { return points_.size(); }
    const std::vector<Quaternion>& constants() const { return constants_; }
    const std::vector<Quaternion>& points() const { return points_; }
    const std::vector<int>& signs() const { return signs_; }

    EvalResult eval(const Quaternion& x) const;

    /// log|f(x)| = log|a_0| + sum M_k log|x - q_k| + sum log|a_k|.
    double log_abs(const Quaternion& x) const;

    const ZeroPoleLedger& ledger() const { return ledger_; }

    /// Delta log|f| at 0 = sum M_k 2/|q_k|^2; requires all q_k != 0.
    double laplacian_log_at_zero_closed() const;

    /// Concatenated product f(x) g(x).
    static PQLFunction product(const PQLFunction& f, const PQLFunction& g);

private:
    void rebuild_ledger();

    std::vector<Quaternion> constants_; // N+1
    std::vector<Quaternion> points_;    // N
    std::vector<int> signs_;            // N, each +-1
    ZeroPoleLedger ledger_;
};

/// Linear fractional transformation g(x) = (ax+b)(cx+d)^{-1} in PQL form.
/// Throws DegenerateTransform when the rows (a,b), (c,d) are left-proportional
/// (the map is constant).
PQLFunction from_mobius(const Quaternion& a, const Quaternion& b, const Quaternion& c,
                        const Quaternion& d);

/// Ordered factor of a norm-multiplicative mixed product: |h| is the product
/// of the parts' moduli, so log|h|, the ledger and the origin closed forms all
/// add across parts.
using MixedPart = std::variant<FactoredSlicePreserving, PQLFunction>;

} // namespace qjensen
