#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diffops.hpp"
#include "quadrature.hpp"
#include "test_common.hpp"

using namespace qjensen;
using qjtest::QuaternionGen;
using qjtest::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
const Quaternion J = Quaternion::unit_j();
}

TEST_CASE("grid weights sum to the sphere area") {
    for (const double rho : {1.0, 2.0, 0.5}) {
        const S3Grid grid({48, 48, 96}, rho);
        double sum = 0.0;
        for (double w : grid.weights()) sum += w;
        CHECK(rel_err(sum, 2.0 * kPi * kPi * rho * rho * rho) < 1e-12);
        for (const auto& d : grid.unit_directions())
            CHECK(std::abs(d.norm() - 1.0) < 1e-14);
    }
}

TEST_CASE("mean of simple integrands") {
    const S3Grid grid({48, 48, 96}, 1.0);
    CHECK(rel_err(mean_on_s3([](const Quaternion&) { return 3.25; }, 1.0, grid), 3.25) < 1e-14);
    const double m =
        mean_on_s3([](const Quaternion& y) { return y.re() * y.re(); }, 1.0, grid);
    CHECK(rel_err(m, 0.25) < 1e-12);
    // odd coordinate averages to zero
    CHECK(std::abs(mean_on_s3([](const Quaternion& y) { return y.x2; }, 1.0, grid)) < 1e-14);
}

TEST_CASE("log mean against the Monte-Carlo oracle") {
    // mean over |y| = 1 of log|y - j/2|; frozen value 1/16 checked by MC
    auto g = [](const Quaternion& y) { return std::log((y - J * 0.5).norm()); };
    const S3Grid grid({48, 48, 96}, 1.0);
    const double quad = mean_on_s3(g, 1.0, grid);
    CHECK(std::abs(quad - 0.0625) < 1e-6);
    const auto mc = mc_mean_on_s3(g, 1.0, 2'000'000, 12345);
    CHECK(std::abs(quad - mc.mean) < 3.0 * mc.std_error + 1e-9);
}

TEST_CASE("grid refinement convergence") {
    auto g = [](const Quaternion& y) { return std::exp(y.re()) + y.x1 * y.x1 * y.x3; };
    const double coarse = mean_on_s3(g, 1.0, S3Grid({24, 24, 48}, 1.0));
    const double fine = mean_on_s3(g, 1.0, S3Grid({48, 48, 96}, 1.0));
    CHECK(rel_err(coarse, fine) < 1e-9);
}

TEST_CASE("rotation invariance of the mean") {
    QuaternionGen gen(401);
    auto g = [](const Quaternion& y) {
        return std::log((y - Quaternion(0.2, 0.3, 0, 0.1)).norm());
    };
    const S3Grid base({48, 48, 96}, 1.0);
    const double m0 = mean_on_s3(g, 1.0, base);
    for (int t = 0; t < 5; ++t) {
        const Quaternion p = gen.unit(), q = gen.unit();
        auto gr = [&](const Quaternion& y) { return g(p * y * q); };
        CHECK(std::abs(mean_on_s3(gr, 1.0, base) - m0) < 1e-10);
    }
}

TEST_CASE("singular node handling rotates the grid") {
    // place a zero exactly in a node direction: a grid rotation must recover
    const S3Grid grid({8, 8, 16}, 1.0);
    const Quaternion hit = grid.unit_directions()[5];
    ZeroPoleLedger ledger;
    LedgerEntry e;
    e.kind = LedgerEntry::Kind::IsolatedPoint;
    e.representative = hit;
    e.multiplicity = 1;
    ledger.entries.push_back(e);
    auto g = [&](const Quaternion& y) { return std::log((y - hit).norm()); };
    MeanMetadata meta;
    const double m = mean_on_s3(g, 1.0, grid, &ledger, 7, &meta);
    CHECK(std::isfinite(m));
    CHECK(meta.rotations_tried >= 1);
}

TEST_CASE("unit 2-sphere averages") {
    CHECK(rel_err(integral_on_s2_units([](const Quaternion&) { return 1.0; }, 0.0, 1.0),
                  4.0 * kPi) < 1e-13);
    CHECK(std::abs(mean_on_s2_units([](const Quaternion& y) { return y.x1; }, 0.0, 1.0)) < 1e-14);
    // radial phi centered at the origin is constant on the sphere alpha + I beta
    const BumpFunction phi(Quaternion{}, 2.0);
    const double alpha = 0.3, beta = 0.8;
    const double avg =
        mean_on_s2_units([&phi](const Quaternion& y) { return phi(y); }, alpha, beta);
    const double at_one_point = phi(Quaternion(alpha) + Quaternion::unit_k() * beta);
    CHECK(rel_err(avg, at_one_point) < 1e-13);
}

TEST_CASE("ball integrals") {
    // volume: pi^2 R^4 / 2
    for (const double R : {1.0, 1.7}) {
        const double vol =
            ball4_integral([](const Quaternion&) { return 1.0; }, Quaternion(0.3), R);
        CHECK(rel_err(vol, kPi * kPi * R * R * R * R / 2.0) < 1e-12);
    }
    // radial second moment: int r^2 = 2 pi^2 R^6 / 6 = pi^2 R^6 / 3
    const double R = 1.3;
    const Quaternion c(0.1, -0.2, 0, 0.4);
    const double mom = ball4_integral(
        [&c](const Quaternion& x) { return (x - c).norm_sq(); }, c, R);
    CHECK(rel_err(mom, kPi * kPi * std::pow(R, 6) / 3.0) < 1e-12);
    // bump times zero
    const BumpFunction phi(c, R);
    CHECK(ball4_integral([&](const Quaternion& x) { return phi(x) * 0.0; }, c, R) == 0.0);
}

TEST_CASE("bump function shape and smoothness") {
    const Quaternion c(0.5, 0, 0, 0);
    const BumpFunction phi(c, 1.0);
    CHECK(phi(c) == doctest::Approx(1.0).epsilon(1e-12));  // amplitude e at t=0
    CHECK(phi(c + Quaternion(0, 1.0, 0, 0)) == 0.0);
    CHECK(phi(c + Quaternion(0, 2.0, 0, 0)) == 0.0);
    CHECK(phi(c + Quaternion(0.5, 0, 0, 0)) ==
          doctest::Approx(std::exp(1.0) * std::exp(-1.0 / 0.75)).epsilon(1e-12));

    // FD bilaplacian of the bump agrees with the radial nested form
    const FDConfig cfg{5e-3, 2, 1.0};
    QuaternionGen gen(403);
    for (int t = 0; t < 5; ++t) {
        const Quaternion x = c + gen.unit() * gen.real(0.1, 0.6);
        const double radial = phi.bilaplacian(x);
        const double full =
            bilaplacian_fd([&phi](const Quaternion& y) { return phi(y); }, x, cfg);
        CHECK(std::abs(radial - full) < 1e-3 * std::max(1.0, std::abs(full)));
    }
}

TEST_CASE("biharmonic mean value property") {
    // u(0) = mean_rho(u) - (rho^2/8) Delta u(0) for biharmonic u
    const FDConfig cfg;
    const double rho = 0.8;
    const S3Grid grid({48, 48, 96}, rho);
    struct Case {
        RealEvaluator u;
        const char* name;
    };
    const Quaternion far(2.5, 1.0, 0, 0);  // q outside the closed ball
    const Case cases[] = {
        {[far](const Quaternion& x) { return std::log((x - far).norm()); }, "log|x-q|"},
        {[](const Quaternion& x) { return x.norm_sq(); }, "|x|^2"},
        {[](const Quaternion& x) { return x.re(); }, "Re x"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const double mean = mean_on_s3(c.u, rho, grid);
        const double lap = laplacian_fd(c.u, Quaternion{}, cfg);
        const double recovered = mean - rho * rho / 8.0 * lap;
        CHECK(std::abs(recovered - c.u(Quaternion{})) < 1e-6);
    }
}

TEST_CASE("pairwise sum is deterministic and accurate") {
    QuaternionGen gen(405);
    std::vector<double> v(10001);
    for (auto& x : v) x = gen.real(-1, 1) * 1e6;
    v.push_back(1e-7);
    const double s1 = pairwise_sum(v);
    const double s2 = pairwise_sum(v);
    CHECK(s1 == s2);
    long double exact = 0.0L;
    for (double x : v) exact += x;
    CHECK(std::abs(s1 - static_cast<double>(exact)) < 1e-6);
}
