#include "quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

#include "diffops.hpp"

namespace qjensen {

namespace {

constexpr double kPi = std::numbers::pi;

int env_thread_cap() {
    if (const char* s = std::getenv("QJ_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration from the Chebyshev-angle initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

S3Grid::S3Grid(const GridSpec& spec, double rho) : spec_(spec), rho_(rho) {
    if (spec.n_psi < 1 || spec.n_theta < 1 || spec.n_phi < 1)
        throw DomainError("grid node counts must be positive");
    if (!(rho > 0.0)) throw DomainError("grid radius must be positive");

    std::vector<double> psi(spec.n_psi), wpsi(spec.n_psi);
    for (int i = 1; i <= spec.n_psi; ++i) {
        psi[i - 1] = i * kPi / (spec.n_psi + 1);
        const double s = std::sin(psi[i - 1]);
        wpsi[i - 1] = kPi / (spec.n_psi + 1) * s * s;
    }
    std::vector<double> ct, wct;
    gauss_legendre(spec.n_theta, ct, wct);

    dirs_.reserve(static_cast<std::size_t>(spec.n_psi) * spec.n_theta * spec.n_phi);
    weights_.reserve(dirs_.capacity());
    const double r3 = rho * rho * rho;
    const double wphi = 2.0 * kPi / spec.n_phi;
    for (int i = 0; i < spec.n_psi; ++i) {
        const double cp = std::cos(psi[i]), sp = std::sin(psi[i]);
        for (int j = 0; j < spec.n_theta; ++j) {
            const double cth = ct[j], sth = std::sqrt(std::max(0.0, 1.0 - ct[j] * ct[j]));
            for (int l = 0; l < spec.n_phi; ++l) {
                const double phi = (l + 0.5) * 2.0 * kPi / spec.n_phi;
                dirs_.push_back({cp, sp * cth, sp * sth * std::cos(phi), sp * sth * std::sin(phi)});
                weights_.push_back(r3 * wpsi[i] * wct[j] * wphi);
            }
        }
    }
}

double S3Grid::surface_area() const { return 2.0 * kPi * kPi * rho_ * rho_ * rho_; }

S3Grid S3Grid::rotated(const Quaternion& p, const Quaternion& q) const {
    S3Grid g = *this;
    for (auto& d : g.dirs_) d = p * d * q;
    return g;
}

double pairwise_sum(const std::vector<double>& values) {
    // Fixed tree: recursion on index ranges, Neumaier at the leaves.
    struct Rec {
        static double run(const double* v, std::size_t n) {
            if (n <= 32) {
                CompensatedSum s;
                for (std::size_t i = 0; i < n; ++i) s.add(v[i]);
                return s.value();
            }
            const std::size_t half = n / 2;
            return run(v, half) + run(v + half, n - half);
        }
    };
    return values.empty() ? 0.0 : Rec::run(values.data(), values.size());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int cap = env_thread_cap();
    if (cap <= 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<std::size_t>(cap, 64));
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 1024;
    auto work = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + kChunk);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

std::pair<Quaternion, Quaternion> random_rotation(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto unit = [&] {
        Quaternion q;
        do {
            q = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        } while (q.norm() < 1e-8);
        return q * (1.0 / q.norm());
    };
    const Quaternion p = unit();
    const Quaternion q = unit();
    return {p, q};
}

namespace {

double grid_mean(const RealEvaluator& g, double rho, const S3Grid& grid, bool* ok) {
    const auto& dirs = grid.unit_directions();
    const auto& w = grid.weights();
    std::vector<double> terms(dirs.size());
    std::atomic<bool> fin{true};
    parallel_for(dirs.size(), [&](std::size_t i) {
        const double v = g(dirs[i] * rho);
        if (!std::isfinite(v)) fin.store(false, std::memory_order_relaxed);
        terms[i] = w[i] * v;
    });
    *ok = fin.load();
    return pairwise_sum(terms) / (2.0 * kPi * kPi * rho * rho * rho);
}

double min_node_clearance(const S3Grid& grid, double rho, const ZeroPoleLedger& ledger) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& d : grid.unit_directions()) m = std::min(m, ledger.clearance(d * rho));
    return m;
}

} // namespace

double mean_on_s3(const RealEvaluator& g, double rho, const S3Grid& grid,
                  const ZeroPoleLedger* ledger, std::uint64_t seed, MeanMetadata* meta) {
    constexpr double kNodeClearance = 1e-6;
    S3Grid work = grid.rho() == rho ? grid : S3Grid(grid.spec(), rho);
    for (int attempt = 0; attempt <= 5; ++attempt) {
        if (attempt > 0) {
            const auto [p, q] = random_rotation(seed + 0x9e3779b97f4a7c15ull * attempt);
            work = (grid.rho() == rho ? grid : S3Grid(grid.spec(), rho)).rotated(p, q);
        }
        double clearance = -1.0;
        if (ledger) {
            clearance = min_node_clearance(work, rho, *ledger);
            if (clearance < kNodeClearance) continue;
        }
        bool ok = false;
        const double m = grid_mean(g, rho, work, &ok);
        if (!ok) continue;
        if (meta) {
            meta->rotations_tried = attempt;
            meta->seed = seed;
            meta->min_node_clearance = clearance;
        }
        return m;
    }
    throw SingularNode("integrand singular on every tried grid orientation");
}

MonteCarloMean mc_mean_on_s3(const RealEvaluator& g, double rho, std::size_t samples,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CompensatedSum sum, sumsq;
    std::size_t used = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        Quaternion d{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        const double n = d.norm();
        if (n < 1e-12) continue;
        const double v = g(d * (rho / n));
        if (!std::isfinite(v)) continue;  // measure-zero singular directions
        sum.add(v);
        sumsq.add(v * v);
        ++used;
    }
    MonteCarloMean out;
    out.samples = used;
    if (used == 0) return out;
    out.mean = sum.value() / used;
    const double var = std::max(0.0, sumsq.value() / used - out.mean * out.mean);
    out.std_error = std::sqrt(var / used);
    return out;
}

namespace {

template <typename Value, typename Fn>
Value s2_units_quadrature(const Fn& g, int n_theta, int n_phi) {
    std::vector<double> ct, wct;
    gauss_legendre(n_theta, ct, wct);
    Value acc{};
    for (int j = 0; j < n_theta; ++j) {
        const double sth = std::sqrt(std::max(0.0, 1.0 - ct[j] * ct[j]));
        for (int l = 0; l < n_phi; ++l) {
            const double phi = (l + 0.5) * 2.0 * kPi / n_phi;
            const Quaternion I{0.0, ct[j], sth * std::cos(phi), sth * std::sin(phi)};
            acc += g(I) * (wct[j] * (2.0 * kPi / n_phi));
        }
    }
    return acc * (1.0 / (4.0 * kPi));
}

} // namespace

double mean_on_s2_units(const RealEvaluator& g, double alpha, double beta, int n_theta,
                        int n_phi) {
    return s2_units_quadrature<double>(
        [&](const Quaternion& I) { return g(Quaternion(alpha) + I * beta); }, n_theta, n_phi);
}

Quaternion mean_on_s2_units_q(const Evaluator& g, double alpha, double beta, int n_theta,
                              int n_phi) {
    return s2_units_quadrature<Quaternion>(
        [&](const Quaternion& I) { return g(Quaternion(alpha) + I * beta); }, n_theta, n_phi);
}

double integral_on_s2_units(const RealEvaluator& g, double alpha, double beta, int n_theta,
                            int n_phi) {
    return 4.0 * kPi * mean_on_s2_units(g, alpha, beta, n_theta, n_phi);
}

double ball4_integral(const RealEvaluator& g, const Quaternion& center, double radius,
                      const BallResolution& res) {
    std::vector<double> rn, rw;
    gauss_legendre(res.n_radial, rn, rw);
    const S3Grid sphere(res.sphere, 1.0);
    const auto& dirs = sphere.unit_directions();
    const auto& w = sphere.weights();
    const std::size_t per_shell = dirs.size();
    std::vector<double> terms(static_cast<std::size_t>(res.n_radial) * per_shell);
    parallel_for(terms.size(), [&](std::size_t idx) {
        const std::size_t m = idx / per_shell;
        const std::size_t i = idx % per_shell;
        const double r = 0.5 * radius * (rn[m] + 1.0);
        const double jac = 0.5 * radius * rw[m] * r * r * r;
        terms[idx] = jac * w[i] * g(center + dirs[i] * r);
    });
    return pairwise_sum(terms);
}

BumpFunction::BumpFunction(const Quaternion& center, double radius, double amplitude)
    : center_(center), radius_(radius), amplitude_(amplitude) {
    if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
}

double BumpFunction::profile(double r) const {
    const double t = r / radius_;
    if (!(t < 1.0)) return 0.0;
    return amplitude_ * std::exp(-1.0 / (1.0 - t * t));
}

BumpFunction::Jet BumpFunction::profile_jet(double r) const {
    Jet jet;
    const double t = std::abs(r) / radius_;
    if (!(t < 1.0)) return jet;
    const double s = 1.0 - t * t;
    const double g = amplitude_ * std::exp(-1.0 / s);
    // v = -1/(1 - t^2); derivatives of exp(v) by Faa di Bruno
    const double v1 = -2.0 * t / (s * s);
    const double v2 = -2.0 * (1.0 + 3.0 * t * t) / (s * s * s);
    const double v3 = -24.0 * t * (1.0 + t * t) / (s * s * s * s);
    const double v4 = -24.0 * (1.0 + 10.0 * t * t + 5.0 * t * t * t * t) / (s * s * s * s * s);
    const double g1 = g * v1;
    const double g2 = g * (v2 + v1 * v1);
    const double g3 = g * (v3 + 3.0 * v1 * v2 + v1 * v1 * v1);
    const double g4 =
        g * (v4 + 4.0 * v1 * v3 + 3.0 * v2 * v2 + 6.0 * v1 * v1 * v2 + v1 * v1 * v1 * v1);
    const double R = radius_;
    jet.value = g;
    jet.d1 = g1 / R;
    jet.d2 = g2 / (R * R);
    jet.d3 = g3 / (R * R * R);
    jet.d4 = g4 / (R * R * R * R);
    return jet;
}

double BumpFunction::laplacian(const Quaternion& x) const {
    const double r = (x - center_).norm();
    const Jet jet = profile_jet(r);
    if (r < 1e-7 * radius_) return 4.0 * jet.d2;  // radial limit at the center
    return jet.d2 + 3.0 * jet.d1 / r;
}

double BumpFunction::bilaplacian(const Quaternion& x) const {
    const double r = (x - center_).norm();
    const Jet jet = profile_jet(r);
    // Below the threshold the 3(w''/r^2 - w'/r^3) cancellation loses digits;
    // the even series gives the limit 8 w''''(0).
    if (r < 1e-5 * radius_) return 8.0 * jet.d4;
    return jet.d4 + 6.0 * jet.d3 / r + 3.0 * jet.d2 / (r * r) - 3.0 * jet.d1 / (r * r * r);
}

} // namespace qjensen
