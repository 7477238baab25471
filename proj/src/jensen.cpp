#include "jensen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace qjensen {

namespace {

/// Everything the engine needs, independent of the concrete function family.
struct Subject {
    RealEvaluator log_abs;                  // log|f|, full function
    ZeroPoleLedger ledger;                  // non-origin entries + origin order
    double lap_log_zero_nonorigin = 0.0;    // closed forms, origin factor excluded
    bool has_tail = false;
    RealEvaluator tail_log_abs;             // only when has_tail
    double log_abs_zero_nonorigin = 0.0;    // log|f_1(0)|
    double log_constant = 0.0;              // sum log|a_k| of PQL constants
    bool tail_warning = false;
    std::string kind;
};

/// Integral of F over [0, pi] with panels geometrically graded toward the
/// angle where the integrand loses smoothness (a near-touching log factor).
double graded_angular_integral(const std::function<double(double)>& F, double singular_angle) {
    static const int kNodes = 16;
    static const auto rule = [] {
        std::vector<double> x, w;
        gauss_legendre(kNodes, x, w);
        return std::make_pair(x, w);
    }();
    const auto& gl_x = rule.first;
    const auto& gl_w = rule.second;
    constexpr double kPi = 3.14159265358979323846;
    CompensatedSum total;
    auto panel = [&](double lo, double hi) {
        for (int i = 0; i < kNodes; ++i) {
            const double th = 0.5 * (hi - lo) * (gl_x[i] + 1.0) + lo;
            total.add(0.5 * (hi - lo) * gl_w[i] * F(th));
        }
    };
    auto graded_side = [&](double from, double to) {
        // from = singular end; subdivide geometrically toward it.
        const double len = std::abs(to - from);
        if (len < 1e-14) return;
        const int levels = 42;
        double inner = len;
        std::vector<double> cuts{to};
        for (int l = 1; l < levels && inner > 1e-13 * len; ++l) {
            inner *= 0.5;
            cuts.push_back(from + (to > from ? inner : -inner));
        }
        cuts.push_back(from);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = std::min(cuts[i], cuts[i + 1]);
            const double b = std::max(cuts[i], cuts[i + 1]);
            if (b > a) panel(a, b);
        }
    };
    const double split = std::clamp(singular_angle, 0.0, kPi);
    graded_side(split, 0.0);
    graded_side(split, kPi);
    return total.value();
}

/// Mean over the sphere |y| = r of log|y - p| for an isolated or real point p
/// (only |p| matters by rotational symmetry).
double point_factor_mean_1d(double r, double pnorm) {
    auto F = [&](double th) {
        const double c = std::cos(th), s = std::sin(th);
        const double d2 = r * r - 2.0 * r * pnorm * c + pnorm * pnorm;
        return 0.5 * std::log(d2) * s * s;
    };
    constexpr double kTwoOverPi = 0.63661977236758134308;
    return kTwoOverPi * graded_angular_integral(F, 0.0);
}

/// Mean over |y| = r of log|(y - a)^s| for the sphere through alpha0 + I beta0.
double sphere_factor_mean_1d(double r, double alpha0, double beta0) {
    const double n2 = alpha0 * alpha0 + beta0 * beta0;
    auto F = [&](double th) {
        const double al = r * std::cos(th), be = r * std::sin(th);
        const double re = al * al - be * be - 2.0 * alpha0 * al + n2;
        const double im = 2.0 * be * (al - alpha0);
        return 0.5 * std::log(re * re + im * im) * std::sin(th) * std::sin(th);
    };
    constexpr double kTwoOverPi = 0.63661977236758134308;
    return kTwoOverPi * graded_angular_integral(F, std::atan2(beta0, alpha0));
}

double factor_mean_1d(const LedgerEntry& e, double r) {
    if (e.kind == LedgerEntry::Kind::Sphere)
        return e.multiplicity * sphere_factor_mean_1d(r, e.alpha, e.beta);
    return e.multiplicity * point_factor_mean_1d(r, e.representative.norm());
}

Subject make_subject(const FactoredSlicePreserving& f) {
    Subject s;
    s.kind = "slice_preserving_factored";
    s.log_abs = [f](const Quaternion& x) { return f.log_abs(x); };
    s.ledger = f.ledger();
    s.lap_log_zero_nonorigin = f.laplacian_log_at_zero_closed();
    s.has_tail = f.tail().has_value();
    if (s.has_tail) {
        const RealCoeffSeries tail = *f.tail();
        s.tail_log_abs = [tail](const Quaternion& x) { return std::log(tail.eval(x).norm()); };
    }
    double l0 = 0.0;
    for (const auto& rf : f.real_factors()) l0 += rf.multiplicity * std::log(std::abs(rf.point));
    for (const auto& sf : f.sphere_factors()) l0 += sf.multiplicity * std::log(sf.point.norm_sq());
    if (f.tail()) l0 += std::log(f.tail()->eval(Quaternion{}).norm());
    s.log_abs_zero_nonorigin = l0;
    s.tail_warning = f.tail_min_modulus_warning();
    return s;
}

Subject make_subject(const PQLFunction& f) {
    Subject s;
    s.kind = "pql";
    s.log_abs = [f](const Quaternion& x) { return f.log_abs(x); };
    s.ledger = f.ledger();
    double lap = 0.0, l0 = 0.0;
    for (const auto& a : f.constants()) {
        l0 += std::log(a.norm());
        s.log_constant += std::log(a.norm());
    }
    for (std::size_t k = 0; k < f.points().size(); ++k) {
        if (f.points()[k].is_zero()) continue;  // folded into the origin order
        lap += f.signs()[k] * 2.0 / f.points()[k].norm_sq();
        l0 += f.signs()[k] * std::log(f.points()[k].norm());
    }
    s.lap_log_zero_nonorigin = lap;
    s.log_abs_zero_nonorigin = l0;
    return s;
}

Subject make_subject(const std::vector<MixedPart>& parts) {
    Subject s;
    s.kind = "mixed";
    std::vector<Subject> subs;
    subs.reserve(parts.size());
    for (const auto& p : parts)
        subs.push_back(std::visit([](const auto& g) { return make_subject(g); }, p));
    if (subs.empty()) throw DomainError("mixed product needs at least one part");
    for (const auto& sub : subs) {
        s.ledger.entries.insert(s.ledger.entries.end(), sub.ledger.entries.begin(),
                                sub.ledger.entries.end());
        s.ledger.origin_order += sub.ledger.origin_order;
        s.ledger.origin_zero_or_pole |= sub.ledger.origin_zero_or_pole;
        s.lap_log_zero_nonorigin += sub.lap_log_zero_nonorigin;
        s.log_abs_zero_nonorigin += sub.log_abs_zero_nonorigin;
        s.log_constant += sub.log_constant;
        s.tail_warning |= sub.tail_warning;
        if (sub.has_tail) {
            if (s.has_tail) {
                auto prev = s.tail_log_abs;
                auto next = sub.tail_log_abs;
                s.tail_log_abs = [prev, next](const Quaternion& x) { return prev(x) + next(x); };
            } else {
                s.has_tail = true;
                s.tail_log_abs = sub.tail_log_abs;
            }
        }
    }
    s.log_abs = [subs](const Quaternion& x) {
        double v = 0.0;
        for (const auto& sub : subs) v += sub.log_abs(x);
        return v;
    };
    return s;
}

std::string entry_source(const LedgerEntry& e) {
    std::ostringstream os;
    switch (e.kind) {
        case LedgerEntry::Kind::RealPoint:
            os << "real " << (e.is_zero() ? "zero" : "pole") << " r=" << e.representative.re();
            break;
        case LedgerEntry::Kind::Sphere:
            os << "sphere " << (e.is_zero() ? "zero" : "pole") << " alpha=" << e.alpha
               << " beta=" << e.beta;
            break;
        case LedgerEntry::Kind::IsolatedPoint:
            os << "pql " << (e.is_zero() ? "zero" : "pole") << " |q|=" << e.representative.norm();
            break;
    }
    os << " (mult " << e.multiplicity << ")";
    return os.str();
}

const char* entry_branch(const LedgerEntry& e) {
    switch (e.kind) {
        case LedgerEntry::Kind::RealPoint: return "real";
        case LedgerEntry::Kind::Sphere: return "spherical";
        default: return "pql";
    }
}

enum class CorrectionMode { Full, ConeReduced };
enum class MeanMode { Direct, BoundaryExtrapolated };

double correction_value(const LedgerEntry& e, double rho, CorrectionMode mode) {
    const double m = e.multiplicity;
    if (e.kind == LedgerEntry::Kind::Sphere) {
        const double n2 = e.alpha * e.alpha + e.beta * e.beta;
        double bracket_term = 0.0;
        if (mode == CorrectionMode::Full) {
            const double r4 = rho * rho * rho * rho;
            bracket_term = 0.25 * (r4 - n2 * n2) / (rho * rho * n2 * n2) *
                           sphere_bracket(e.representative);
        }
        return -m * (std::log(rho * rho / n2) + bracket_term);
    }
    const double q2 = e.representative.norm_sq();
    const double r4 = rho * rho * rho * rho;
    return -m * (std::log(rho / std::sqrt(q2)) + 0.25 * (q2 * q2 - r4) / (rho * rho * q2));
}

/// Laplacian term (rho^2/8) Delta log|f|(0); origin factor must already be
/// stripped. Closed forms plus an FD pass over the tail.
double laplacian_term(const Subject& s, double rho, const JensenOptions& opts,
                      JensenMetadata& meta) {
    double lap = s.lap_log_zero_nonorigin;
    meta.laplacian_path = "closed-form";
    if (s.has_tail) {
        FDConfig cfg = opts.fd;
        cfg.h = std::min(cfg.h, 1e-2);
        lap += laplacian_fd(s.tail_log_abs, Quaternion{}, cfg);
        meta.laplacian_path = "closed-form+fd-tail";
    }
    return rho * rho / 8.0 * lap;
}

JensenReport engine(const Subject& s, double rho, const JensenOptions& opts,
                    CorrectionMode cmode, MeanMode mmode, bool allow_origin) {
    if (!(rho > 0.0)) throw PreconditionFailed("rho must be positive");
    JensenReport rep;
    rep.rho = rho;
    rep.metadata.grid = opts.grid;
    rep.metadata.fd_h = opts.fd.h;
    rep.metadata.richardson_levels = opts.fd.richardson_levels;
    rep.metadata.seed = opts.seed;
    if (s.tail_warning)
        rep.metadata.notes += "tail min sampled modulus < 1e-9 (caller asserts zero-free); ";

    const auto boundary_hits = s.ledger.boundary_contact(rho, opts.boundary_delta);
    if (mmode == MeanMode::Direct && !boundary_hits.empty())
        throw BoundaryContact("ledger entry on the integration sphere; use boundary_case");
    if (!allow_origin && s.ledger.origin_order != 0)
        throw OriginSingular("zero or pole at the origin; use origin_case");

    // Left-hand side.
    rep.origin_k = s.ledger.origin_order;
    rep.origin_adjusted = s.ledger.origin_order != 0;
    rep.log_f1_at_zero = s.log_abs_zero_nonorigin;
    rep.lhs = rep.origin_k * std::log(rho) + rep.log_f1_at_zero;

    if (cmode == CorrectionMode::ConeReduced) {
        for (const auto& e : s.ledger.entries) {
            if (e.kind != LedgerEntry::Kind::Sphere)
                throw PreconditionFailed("cone case admits only spherical entries");
            if (std::abs(e.beta - std::abs(e.alpha)) > 1e-12)
                throw PreconditionFailed("spherical entry off the cone boundary");
        }
        rep.metadata.cone_reduction = true;
    }

    // Corrections from strictly interior, off-boundary entries.
    CompensatedSum corr;
    for (const auto& e : s.ledger.entries) {
        const double mod = e.modulus();
        if (mod >= rho || std::abs(mod - rho) <= opts.boundary_delta) continue;
        JensenCorrection c;
        c.source = entry_source(e);
        c.branch = entry_branch(e);
        c.value = correction_value(e, rho, cmode);
        corr.add(c.value);
        rep.corrections.push_back(std::move(c));
    }
    rep.corrections_sum = corr.value();

    rep.laplacian_term = laplacian_term(s, rho, opts, rep.metadata);

    // Mean of log|f| over the boundary sphere.
    if (mmode == MeanMode::Direct) {
        MeanMetadata mmeta;
        rep.mean_term = mean_on_s3(s.log_abs, rho, S3Grid(opts.grid, rho), &s.ledger, opts.seed,
                                   &mmeta);
        rep.metadata.rotations_tried = mmeta.rotations_tried;
        rep.metadata.min_node_clearance = mmeta.min_node_clearance;
    } else {
        // Radius extrapolation past boundary zeros/poles. No practical 3D
        // grid resolves the log layer at distance eps*rho, so each mean is
        // assembled per factor: graded 1D rules for the ledger entries (the
        // integrands are axially symmetric) plus the grid for the tail.
        rep.metadata.boundary_extrapolation = true;
        rep.metadata.notes += "boundary means via per-factor graded 1D quadrature; ";
        const double eps[3] = {4e-3, 2e-3, 1e-3};
        double means[3];
        for (int i = 0; i < 3; ++i) {
            const double r = rho * (1.0 + eps[i]);
            CompensatedSum m;
            for (const auto& e : s.ledger.entries) m.add(factor_mean_1d(e, r));
            m.add(s.ledger.origin_order * std::log(r));
            m.add(s.log_constant);
            if (s.has_tail)
                m.add(mean_on_s3(s.tail_log_abs, r, S3Grid(opts.grid, r), nullptr,
                                 opts.seed + static_cast<std::uint64_t>(i)));
            means[i] = m.value();
            rep.metadata.extrapolation_radii.push_back(r);
            rep.metadata.extrapolation_means.push_back(means[i]);
        }
        // Neville to eps = 0.
        const double p01 = means[1] + (means[0] - means[1]) * (0.0 - eps[1]) / (eps[0] - eps[1]);
        const double p12 = means[2] + (means[1] - means[2]) * (0.0 - eps[2]) / (eps[1] - eps[2]);
        const double p012 = p12 + (p01 - p12) * (0.0 - eps[2]) / (eps[0] - eps[2]);
        constexpr double kTol = 1e-3;
        if (std::abs(p012 - p12) > 10.0 * kTol)
            throw ExtrapolationUnstable("boundary mean extrapolants diverge");
        rep.mean_term = p012;
    }

    rep.residual = rep.lhs - (rep.mean_term - rep.laplacian_term + rep.corrections_sum);
    return rep;
}

} // namespace

double jensen_correction_value(const LedgerEntry& e, double rho) {
    return correction_value(e, rho, CorrectionMode::Full);
}

JensenReport jensen_terms_slice_preserving(const FactoredSlicePreserving& f, double rho,
                                           const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::Full, MeanMode::Direct, false);
}

JensenReport jensen_terms_pql(const PQLFunction& f, double rho, const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::Full, MeanMode::Direct, false);
}

JensenReport jensen_mixed(const std::vector<MixedPart>& parts, double rho,
                          const JensenOptions& opts) {
    return engine(make_subject(parts), rho, opts, CorrectionMode::Full, MeanMode::Direct, false);
}

JensenReport origin_case(const FactoredSlicePreserving& f, double rho, const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::Full, MeanMode::Direct, true);
}

JensenReport origin_case(const PQLFunction& f, double rho, const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::Full, MeanMode::Direct, true);
}

JensenReport boundary_case(const FactoredSlicePreserving& f, double rho,
                           const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::Full,
                  MeanMode::BoundaryExtrapolated, true);
}

JensenReport boundary_case(const PQLFunction& f, double rho, const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::Full,
                  MeanMode::BoundaryExtrapolated, true);
}

JensenReport cone_case_report(const FactoredSlicePreserving& f, double rho,
                              const JensenOptions& opts) {
    return engine(make_subject(f), rho, opts, CorrectionMode::ConeReduced, MeanMode::Direct,
                  false);
}

namespace {

template <typename F>
JensenReport auto_dispatch(const F& f, double rho, const JensenOptions& opts) {
    try {
        return engine(make_subject(f), rho, opts, CorrectionMode::Full, MeanMode::Direct, false);
    } catch (const BoundaryContact&) {
        return boundary_case(f, rho, opts);
    } catch (const OriginSingular&) {
        return origin_case(f, rho, opts);
    }
}

} // namespace

JensenReport jensen_auto(const FactoredSlicePreserving& f, double rho, const JensenOptions& opts) {
    return auto_dispatch(f, rho, opts);
}

JensenReport jensen_auto(const PQLFunction& f, double rho, const JensenOptions& opts) {
    return auto_dispatch(f, rho, opts);
}

ZeroCountBound zero_count_bound(const FactoredSlicePreserving& f, double r, double R,
                                const JensenOptions& opts) {
    if (!(r > 0.0) || !(r < R)) throw PreconditionFailed("need 0 < r < R");
    if (f.monomial_power() != 0) throw PreconditionFailed("f(0) must be nonzero");
    for (const auto& e : f.ledger().entries) {
        if (e.multiplicity < 0) throw PreconditionFailed("zero-count bound needs a regular f");
        if (e.kind != LedgerEntry::Kind::Sphere)
            throw PreconditionFailed("all zeros must lie in the cone C (spherical)");
        if (e.beta < std::abs(e.alpha) - 1e-12)
            throw PreconditionFailed("zero sphere outside the cone C");
    }
    ZeroCountBound out;
    for (const auto& e : f.ledger().entries)
        if (e.modulus() < r) out.n_actual += e.multiplicity;

    const S3Grid grid(opts.grid, R);
    double max_log = -std::numeric_limits<double>::infinity();
    for (const auto& d : grid.unit_directions())
        max_log = std::max(max_log, f.log_abs(d * R));
    out.max_modulus_at_R = std::exp(max_log);

    double lap = f.laplacian_log_at_zero_closed();
    if (f.tail()) {
        const RealCoeffSeries tail = *f.tail();
        lap += laplacian_fd([tail](const Quaternion& x) { return std::log(tail.eval(x).norm()); },
                            Quaternion{}, opts.fd);
    }
    const double log_f0 = f.log_abs(Quaternion{});
    out.bound = 0.5 * (max_log - log_f0 - R * R / 8.0 * lap) / (std::log(R) - std::log(r));
    return out;
}

ZeroFreeRadius zero_free_radius(const FactoredSlicePreserving& f, const JensenOptions& opts) {
    if (f.monomial_power() != 0) throw PreconditionFailed("f(0) must be nonzero");
    for (const auto& e : f.ledger().entries) {
        if (e.multiplicity < 0) throw PreconditionFailed("zero-free radius needs a regular f");
        if (e.kind == LedgerEntry::Kind::Sphere && e.beta < std::abs(e.alpha) - 1e-12)
            throw PreconditionFailed("zero sphere outside the cone C");
        if (e.kind == LedgerEntry::Kind::RealPoint)
            throw PreconditionFailed("real zeros do not lie in the cone C");
    }
    // f slice preserving: f^s = f^2.
    double lap = f.laplacian_log_at_zero_closed();
    if (f.tail()) {
        const RealCoeffSeries tail = *f.tail();
        lap += laplacian_fd([tail](const Quaternion& x) { return std::log(tail.eval(x).norm()); },
                            Quaternion{}, opts.fd);
    }
    const double log_fs0 = 2.0 * f.log_abs(Quaternion{});
    const double lap_fs = 2.0 * lap;
    ZeroFreeRadius out;
    out.guard = std::exp(log_fs0 + lap_fs / 8.0);
    if (out.guard > 1.0) {
        out.vacuous = true;
        out.radius = 1.0;
    } else {
        out.radius = std::exp(0.5 * log_fs0 + lap_fs / 16.0);
    }
    for (const auto& e : f.ledger().entries)
        if (e.modulus() < out.radius) out.ledger_consistent = false;
    return out;
}

double blaschke_sphere_mean(const BlaschkeSpec& B, double r) {
    const double na = B.a().norm();
    const double rho = B.rho();
    if (!(r > std::max(na, rho * rho / na)))
        throw PreconditionFailed("need r > max(|a|, rho^2/|a|)");
    const double r4 = rho * rho * rho * rho;
    const double a4 = na * na * na * na;
    if (B.kind() == BlaschkeKind::Punctual)
        return std::log(na / rho) + 0.25 * (r4 - a4) / (na * na * r * r);
    return 2.0 * std::log(na / rho) - 0.25 * (r4 - a4) / (a4 * r * r) * sphere_bracket(B.a());
}

double pql_sphere_mean(const PQLFunction& f, double rho) {
    CompensatedSum s;
    for (std::size_t k = 0; k < f.points().size(); ++k) {
        const double q2 = f.points()[k].norm_sq();
        if (q2 == 0.0 || !(std::sqrt(q2) < rho))
            throw PreconditionFailed("all factors must satisfy 0 < |q_k| < rho");
        const double m = f.signs()[k];
        s.add(rho * rho / 8.0 * m * 2.0 / q2);
        s.add(m * (std::log(rho) + 0.25 * (q2 * q2 - rho * rho * rho * rho) / (rho * rho * q2)));
    }
    for (const auto& a : f.constants()) s.add(std::log(a.norm()));
    return s.value();
}

} // namespace qjensen
