#include "diffops.hpp"

#include <cmath>

namespace qjensen {

namespace {

void check_clearance(const Quaternion& x, const FDConfig& cfg, const ZeroPoleLedger* ledger,
                     double stencil_extent) {
    if (!ledger) return;  // black-box evaluator: clearance is the caller's responsibility
    const double c = ledger->clearance(x);
    if (c < cfg.min_clearance)
        throw ClearanceError("singularity within min_clearance of the stencil point");
    if (stencil_extent > c)
        throw ClearanceError("stencil extends into a singular region");
}

Quaternion axis_offset(int axis, double h) {
    Quaternion e{};
    switch (axis) {
        case 0: e.x0 = h; break;
        case 1: e.x1 = h; break;
        case 2: e.x2 = h; break;
        default: e.x3 = h; break;
    }
    return e;
}

double laplacian_once(const RealEvaluator& u, const Quaternion& x, double h) {
    // Fixed offset order keeps the compensated reduction deterministic.
    CompensatedSum s;
    for (int axis = 0; axis < 4; ++axis) {
        const Quaternion e = axis_offset(axis, h);
        s.add(u(x + e));
        s.add(u(x - e));
    }
    s.add(-8.0 * u(x));
    return s.value() / (h * h);
}

/// Richardson table for an h^2-series quantity sampled at h, h/2, ..., h/2^levels.
double richardson(const std::vector<double>& samples) {
    std::vector<double> row = samples;
    double p = 4.0;  // eliminate h^2, then h^4, ...
    while (row.size() > 1) {
        for (std::size_t l = 0; l + 1 < row.size(); ++l)
            row[l] = (p * row[l + 1] - row[l]) / (p - 1.0);
        row.pop_back();
        p *= 4.0;
    }
    return row[0];
}

} // namespace

double laplacian_fd(const RealEvaluator& u, const Quaternion& x, const FDConfig& cfg,
                    const ZeroPoleLedger* ledger) {
    check_clearance(x, cfg, ledger, cfg.h * 1.0);
    std::vector<double> samples;
    double h = cfg.h;
    for (int l = 0; l <= cfg.richardson_levels; ++l, h *= 0.5)
        samples.push_back(laplacian_once(u, x, h));
    return richardson(samples);
}

double bilaplacian_fd(const RealEvaluator& u, const Quaternion& x, const FDConfig& cfg,
                      const ZeroPoleLedger* ledger) {
    // Fourth differences amplify rounding like eps/h^4, so the finest sample
    // stays at cfg.h and the extrapolation ladder climbs upward from it.
    const double coarsest = cfg.h * double(1 << cfg.richardson_levels);
    check_clearance(x, cfg, ledger, coarsest * 2.0);
    std::vector<double> samples;
    for (int l = cfg.richardson_levels; l >= 0; --l) {
        const double hh = cfg.h * double(1 << l);
        samples.push_back(
            laplacian_once([&](const Quaternion& y) { return laplacian_once(u, y, hh); }, x, hh));
    }
    return richardson(samples);
}

Quaternion cauchy_fueter_fd(const Evaluator& f, const Quaternion& x, CauchyFueter which,
                            const FDConfig& cfg, const ZeroPoleLedger* ledger) {
    check_clearance(x, cfg, ledger, cfg.h * 1.0);
    const double sign = which == CauchyFueter::D ? 1.0 : -1.0;
    const Quaternion units[4] = {Quaternion(1.0), Quaternion::unit_i() * sign,
                                 Quaternion::unit_j() * sign, Quaternion::unit_k() * sign};
    std::vector<Quaternion> samples;
    double h = cfg.h;
    for (int l = 0; l <= cfg.richardson_levels; ++l, h *= 0.5) {
        Quaternion acc{};
        for (int axis = 0; axis < 4; ++axis) {
            const Quaternion e = axis_offset(axis, h);
            const Quaternion d = (f(x + e) - f(x - e)) * (1.0 / (2.0 * h));
            acc += units[axis] * d;  // left multiplication, displayed order
        }
        samples.push_back(acc);
    }
    // Componentwise Richardson.
    Quaternion out{};
    for (int c = 0; c < 4; ++c) {
        std::vector<double> comp;
        comp.reserve(samples.size());
        for (const auto& q : samples) comp.push_back(q.coords()[c]);
        const double v = richardson(comp);
        switch (c) {
            case 0: out.x0 = v; break;
            case 1: out.x1 = v; break;
            case 2: out.x2 = v; break;
            default: out.x3 = v; break;
        }
    }
    return out;
}

MollifiedLogLaplacians mollified_log_laplacians(const Quaternion& x, double eps) {
    if (!(eps > 0.0)) throw DomainError("mollifier needs eps > 0");
    const double r2 = x.norm_sq();
    const double d = r2 + eps * eps;
    MollifiedLogLaplacians out;
    out.laplacian = 4.0 * (r2 + 2.0 * eps * eps) / (d * d);
    out.bilaplacian = -96.0 * eps * eps * eps * eps / (d * d * d * d);
    return out;
}

} // namespace qjensen
