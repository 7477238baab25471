#include "riesz.hpp"

#include <cmath>

#include "diffops.hpp"

namespace qjensen {

namespace {

ZeroPoleLedger ledger_of(const RieszFunction& f) {
    return std::visit([](const auto& g) { return g.ledger(); }, f);
}

double adjoint_integral(const RealEvaluator& log_abs, const BumpFunction& phi,
                        const RieszOptions& opts) {
    const double jit = opts.node_jitter * phi.radius();
    auto integrand = [&](const Quaternion& x) {
        double v = log_abs(x);
        if (!std::isfinite(v)) {
            // Node hit an exact zero/pole; a measure-zero event under the rule.
            v = log_abs(x + Quaternion(jit, jit, jit, jit));
        }
        return v * phi.bilaplacian(x);
    };
    return ball4_integral(integrand, phi.center(), phi.radius(), opts.resolution);
}

/// 1D partition of [lo, hi] graded geometrically toward each cut point, for
/// integrands with log singularities at the cuts.
std::vector<double> graded_partition(double lo, double hi, std::vector<double> cuts,
                                     int base = 24) {
    std::vector<double> edges;
    for (int i = 0; i <= base; ++i) edges.push_back(lo + (hi - lo) * i / base);
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts) {
        if (c <= lo || c >= hi) continue;
        edges.push_back(c);
        double w = hi - lo;
        for (int l = 0; l < 36 && w > 1e-13 * (hi - lo); ++l) {
            w *= 0.5;
            if (c - w > lo) edges.push_back(c - w);
            if (c + w < hi) edges.push_back(c + w);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

/// Adjoint integral for an axially symmetric log|f| (slice preserving f):
///   Int log|f| Delta^2 phi dx
///     = Int_{beta >= 0} L(alpha, beta) beta^2 G(alpha, beta) dalpha dbeta,
/// with G the total unit-2-sphere integral of Delta^2 phi on the orbit
/// alpha + I beta. L is singular only at the ledger points of the half-plane,
/// where the panels are graded.
double adjoint_integral_axisymmetric(const FactoredSlicePreserving& f, const BumpFunction& phi,
                                     const RieszOptions& opts) {
    (void)opts;
    const double R = phi.radius();
    const double c0 = phi.center().re();
    const double cim = phi.center().im_norm();
    const double alo = c0 - R, ahi = c0 + R;
    const double blo = std::max(0.0, cim - R), bhi = cim + R;

    std::vector<double> acuts, bcuts;
    for (const auto& e : f.ledger().entries) {
        if (e.kind == LedgerEntry::Kind::Sphere) {
            acuts.push_back(e.alpha);
            bcuts.push_back(e.beta);
        } else {
            acuts.push_back(e.representative.re());
            bcuts.push_back(0.0);
        }
    }
    if (f.ledger().origin_zero_or_pole) {
        acuts.push_back(0.0);
        bcuts.push_back(0.0);
    }
    const auto aedges = graded_partition(alo, ahi, acuts);
    const auto bedges = graded_partition(blo, bhi, bcuts);

    static const auto rule = [] {
        std::vector<double> x, w;
        gauss_legendre(8, x, w);
        return std::make_pair(x, w);
    }();
    const auto& gx = rule.first;
    const auto& gw = rule.second;

    // Radial profile of Delta^2 phi tabulated on [0, R] (linear interp; the
    // profile is smooth and the table spacing is far below the bump scale).
    constexpr int kTab = 8192;
    std::vector<double> ftab(kTab + 1);
    for (int i = 0; i <= kTab; ++i)
        ftab[i] = phi.bilaplacian(phi.center() + Quaternion(R * i / kTab));
    auto F = [&](double r) {
        if (r >= R) return 0.0;
        const double s = r / R * kTab;
        const int i = std::min(static_cast<int>(s), kTab - 1);
        const double t = s - i;
        return ftab[i] * (1.0 - t) + ftab[i + 1] * t;
    };

    // G(alpha, beta) = Int_{S^2} Delta^2 phi(alpha + I beta) dsigma(I). Only
    // the distance |x - c| varies over the orbit; substituting r for the
    // angular variable gives (2 pi / (beta cim)) Int F(r) r dr over the
    // orbit's distance range, resolved with panels at the bump's scale.
    constexpr double kFourPi = 4.0 * 3.14159265358979323846;
    auto G = [&](double alpha, double beta) {
        const double A = (alpha - c0) * (alpha - c0) + beta * beta + cim * cim;
        const double spread = 2.0 * beta * cim;
        if (spread <= 1e-9 * std::max(A, 1e-300)) return kFourPi * F(std::sqrt(A));
        const double rlo = std::sqrt(std::max(0.0, A - spread));
        const double rhi = std::sqrt(A + spread);
        const int panels = std::max(6, static_cast<int>(std::ceil((rhi - rlo) / (0.1 * R))));
        double s = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = rlo + (rhi - rlo) * p / panels;
            const double hi = rlo + (rhi - rlo) * (p + 1) / panels;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                const double r = 0.5 * (hi - lo) * (gx[i] + 1.0) + lo;
                s += 0.5 * (hi - lo) * gw[i] * F(r) * r;
            }
        }
        return kFourPi * s / spread;
    };

    struct Cell {
        double a0, a1, b0, b1;
    };
    std::vector<Cell> cells;
    for (std::size_t ia = 0; ia + 1 < aedges.size(); ++ia) {
        for (std::size_t ib = 0; ib + 1 < bedges.size(); ++ib) {
            const Cell c{aedges[ia], aedges[ia + 1], bedges[ib], bedges[ib + 1]};
            // skip cells outside the (alpha, beta) shadow of the support
            const double dxa = std::max({c.a0 - c0, c0 - c.a1, 0.0});
            const double dxb = std::max({c.b0 - cim, cim - c.b1, 0.0});
            if (dxa * dxa + dxb * dxb >= R * R) continue;
            cells.push_back(c);
        }
    }
    std::vector<double> partials(cells.size(), 0.0);
    parallel_for(cells.size(), [&](std::size_t idx) {
        const Cell& c = cells[idx];
        CompensatedSum cell_sum;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double alpha = 0.5 * (c.a1 - c.a0) * (gx[i] + 1.0) + c.a0;
            const double wa = 0.5 * (c.a1 - c.a0) * gw[i];
            for (std::size_t j = 0; j < gx.size(); ++j) {
                const double beta = 0.5 * (c.b1 - c.b0) * (gx[j] + 1.0) + c.b0;
                const double wb = 0.5 * (c.b1 - c.b0) * gw[j];
                const double L = f.log_abs(Quaternion(alpha, beta, 0, 0));
                if (!std::isfinite(L)) continue;  // exact hit, measure zero
                cell_sum.add(wa * wb * beta * beta * L * G(alpha, beta));
            }
        }
        partials[idx] = cell_sum.value();
    });
    return pairwise_sum(partials);
}

} // namespace

RieszPrediction RieszPrediction::from_ledger(const ZeroPoleLedger& ledger) {
    RieszPrediction p;
    if (ledger.origin_zero_or_pole && ledger.origin_order != 0)
        p.point_masses.push_back({Quaternion{}, ledger.origin_order});
    for (const auto& e : ledger.entries) {
        if (e.kind == LedgerEntry::Kind::Sphere)
            p.sphere_masses.push_back({e.alpha, e.beta, e.representative, e.multiplicity});
        else
            p.point_masses.push_back({e.representative, e.multiplicity});
    }
    return p;
}

double pairing(const RieszFunction& f, const BumpFunction& phi, const RieszOptions& opts) {
    // Slice preserving log|f| is axisymmetric: the half-plane route handles
    // sphere singularities that defeat any grid centered on the bump.
    if (const auto* fac = std::get_if<FactoredSlicePreserving>(&f)) {
        if (opts.route == PairingRoute::Auto)
            return adjoint_integral_axisymmetric(*fac, phi, opts) / kGammaMeasured;
        const FactoredSlicePreserving g = *fac;
        return adjoint_integral([g](const Quaternion& x) { return g.log_abs(x); }, phi, opts) /
               kGammaMeasured;
    }
    const PQLFunction g = std::get<PQLFunction>(f);
    return adjoint_integral([g](const Quaternion& x) { return g.log_abs(x); }, phi, opts) /
           kGammaMeasured;
}

double pairing(const std::vector<MixedPart>& parts, const BumpFunction& phi,
               const RieszOptions& opts) {
    // log|h| adds across parts, so each part takes its best-suited route.
    double total = 0.0;
    for (const auto& p : parts)
        total += std::visit([&](const auto& g) { return pairing(RieszFunction{g}, phi, opts); },
                            p);
    return total;
}

double predicted_pairing(const RieszPrediction& pred, const BumpFunction& phi,
                         const RieszOptions& opts) {
    CompensatedSum s;
    for (const auto& pm : pred.point_masses) s.add(pm.weight * phi(pm.point));
    for (const auto& sm : pred.sphere_masses)
        s.add(sm.weight * integral_on_s2_units([&phi](const Quaternion& y) { return phi(y); },
                                               sm.alpha, sm.beta, opts.s2_theta, opts.s2_phi));
    return s.value();
}

namespace {

RieszCheck assemble_check(double pair_value, const RieszPrediction& pred, const BumpFunction& phi,
                          const RieszOptions& opts) {
    RieszCheck out;
    out.pairing_value = pair_value;
    out.predicted = predicted_pairing(pred, phi, opts);
    out.residual = out.pairing_value - out.predicted;
    out.resolution = opts.resolution;
    if (!pred.sphere_masses.empty()) {
        // Separate the (exact) point part and express the sphere remainder as
        // a constant per unit dsigma_S next to the nominal gamma.
        double point_part = 0.0;
        for (const auto& pm : pred.point_masses) point_part += pm.weight * phi(pm.point);
        double sigma_sum = 0.0;
        for (const auto& sm : pred.sphere_masses)
            sigma_sum += sm.weight *
                         integral_on_s2_units([&phi](const Quaternion& y) { return phi(y); },
                                              sm.alpha, sm.beta, opts.s2_theta, opts.s2_phi);
        SphereConstantRecord rec;
        rec.sigma_integral_sum = sigma_sum;
        if (sigma_sum != 0.0)
            rec.measured = kGammaMeasured * (pair_value - point_part) / sigma_sum;
        rec.agrees_with_nominal = std::abs(rec.measured - rec.nominal) <= 1e-2 * std::abs(rec.nominal);
        out.sphere_constant = rec;
    }
    return out;
}

} // namespace

RieszCheck riesz_residual(const RieszFunction& f, const BumpFunction& phi,
                          const RieszOptions& opts) {
    return assemble_check(pairing(f, phi, opts), RieszPrediction::from_ledger(ledger_of(f)), phi,
                          opts);
}

RieszCheck riesz_residual_mixed(const std::vector<MixedPart>& parts, const BumpFunction& phi,
                                const RieszOptions& opts) {
    ZeroPoleLedger merged;
    for (const auto& p : parts) {
        const ZeroPoleLedger l = std::visit([](const auto& g) { return g.ledger(); }, p);
        merged.entries.insert(merged.entries.end(), l.entries.begin(), l.entries.end());
        merged.origin_order += l.origin_order;
        merged.origin_zero_or_pole |= l.origin_zero_or_pole;
    }
    return assemble_check(pairing(parts, phi, opts), RieszPrediction::from_ledger(merged), phi,
                          opts);
}

MollifiedDeltaTable mollified_delta_check(const std::vector<double>& eps_sequence,
                                          const BumpFunction* phi) {
    MollifiedDeltaTable table;
    table.phi_at_zero = phi ? (*phi)(Quaternion{}) : 1.0;
    table.nominal_limit = 2.0 * kGammaNominal * table.phi_at_zero;
    table.measured_limit = 2.0 * kGammaMeasured * table.phi_at_zero;

    constexpr double kTwoPiSq = 2.0 * 9.869604401089358619;
    for (double eps : eps_sequence) {
        if (!(eps > 0.0)) throw DomainError("mollifier eps must be positive");
        auto density = [eps](double r) {
            const double d = r * r + eps * eps;
            return -96.0 * eps * eps * eps * eps / (d * d * d * d);
        };
        double integral = 0.0;
        if (!phi) {
            // phi == 1: radial integral over [0, inf) via r = eps u/(1-u).
            std::vector<double> un, uw;
            gauss_legendre(256, un, uw);
            CompensatedSum s;
            for (int i = 0; i < 256; ++i) {
                const double u = 0.5 * (un[i] + 1.0);
                const double w = 0.5 * uw[i];
                const double r = eps * u / (1.0 - u);
                const double dr = eps / ((1.0 - u) * (1.0 - u));
                s.add(w * density(r) * kTwoPiSq * r * r * r * dr);
            }
            integral = s.value();
        } else {
            // 4D integral over the bump support: radial shells resolving the
            // eps peak times sphere averages of phi.
            const double outer = phi->center().norm() + phi->radius();
            const S3Grid sphere(GridSpec{16, 16, 32}, 1.0);
            auto shell_avg = [&](double r) {
                CompensatedSum a;
                for (std::size_t i = 0; i < sphere.size(); ++i)
                    a.add(sphere.weights()[i] * (*phi)(sphere.unit_directions()[i] * r));
                return a.value() / sphere.surface_area();
            };
            std::vector<double> gn, gw;
            gauss_legendre(96, gn, gw);
            const double split = std::min(10.0 * eps, outer);
            CompensatedSum s;
            for (int piece = 0; piece < 2; ++piece) {
                const double lo = piece == 0 ? 0.0 : split;
                const double hi = piece == 0 ? split : outer;
                if (!(hi > lo)) continue;
                for (int i = 0; i < 96; ++i) {
                    const double r = 0.5 * (hi - lo) * (gn[i] + 1.0) + lo;
                    const double w = 0.5 * (hi - lo) * gw[i];
                    s.add(w * density(r) * kTwoPiSq * r * r * r * shell_avg(r));
                }
            }
            integral = s.value();
        }
        table.rows.push_back({eps, integral});
    }
    return table;
}

} // namespace qjensen
