#pragma once

#include <vector>

#include "factored.hpp"
#include "quaternion.hpp"
#include "series.hpp"

namespace qjensen {

struct ClearanceError : DomainError {
    using DomainError::DomainError;
};

/// Step and extrapolation policy for the finite-difference operators.
/// The stencil must stay clear of singularities: h <= min_clearance / 8.
struct FDConfig {
    double h = 1e-2;
    int richardson_levels = 2;
    double min_clearance = 1e-1;

    static FDConfig at(const Quaternion& x) {
        FDConfig cfg;
        cfg.h = 1e-2 * std::max(1.0, x.norm());
        return cfg;
    }
    FDConfig with_h(double hh) const {
        FDConfig c = *this;
        c.h = hh;
        return c;
    }
};

/// Neumaier compensated accumulator; deterministic given a fixed add order.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// 4D Laplacian by second central differences on each axis, Richardson
/// extrapolated over halved steps. Checks ledger clearance when given one.
double laplacian_fd(const RealEvaluator& u, const Quaternion& x, const FDConfig& cfg,
                    const ZeroPoleLedger* ledger = nullptr);

/// Bilaplacian as the composition of two Laplacian stencils.
double bilaplacian_fd(const RealEvaluator& u, const Quaternion& x, const FDConfig& cfg,
                      const ZeroPoleLedger* ledger = nullptr);

enum class CauchyFueter { D, DBar };  // D_CF = d0 + i d1 + j d2 + k d3, DBar flips the signs

Quaternion cauchy_fueter_fd(const Evaluator& f, const Quaternion& x, CauchyFueter which,
                            const FDConfig& cfg, const ZeroPoleLedger* ledger = nullptr);

/// Closed forms from the mollified family u_eps = log(|x|^2 + eps^2):
///   Delta   u_eps = 4 (r^2 + 2 eps^2) / (r^2 + eps^2)^2
///   Delta^2 u_eps = -96 eps^4 / (r^2 + eps^2)^4
struct MollifiedLogLaplacians {
    double laplacian = 0.0;
    double bilaplacian = 0.0;
};
MollifiedLogLaplacians mollified_log_laplacians(const Quaternion& x, double eps);

} // namespace qjensen
