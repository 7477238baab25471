#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jensen.hpp"
#include "test_common.hpp"

using namespace qjensen;
using qjtest::QuaternionGen;
using qjtest::rel_err;

namespace {
const Quaternion I = Quaternion::unit_i();
const Quaternion J = Quaternion::unit_j();

FactoredSlicePreserving sphere_zero(const Quaternion& q, int mult = 1) {
    return FactoredSlicePreserving(0, {}, {{q, mult}});
}
}

TEST_CASE("worked case: (x-i)^s at rho = 2") {
    const auto f = sphere_zero(I);
    const JensenReport rep = jensen_terms_slice_preserving(f, 2.0);
    CHECK(rep.lhs == 0.0);  // log|f(0)| = log 1
    // laplacian term: (rho^2/8) * (-4) = -2
    CHECK(rep.laplacian_term == doctest::Approx(-2.0).epsilon(1e-14));
    // single spherical correction: -(log 4 + 15/8)
    REQUIRE(rep.corrections.size() == 1);
    CHECK(rep.corrections[0].branch == "spherical");
    CHECK(rep.corrections[0].value ==
          doctest::Approx(-(std::log(4.0) + 15.0 / 8.0)).epsilon(1e-14));
    // predicted mean log 4 - 1/8
    CHECK(std::abs(rep.mean_term - (std::log(4.0) - 0.125)) < 1e-6);
    CHECK(std::abs(rep.residual) < 1e-4);
}

TEST_CASE("worked case: x - j/2 at rho = 1 (PQL)") {
    const PQLFunction f = PQLFunction::linear(J * 0.5);
    const JensenReport rep = jensen_terms_pql(f, 1.0);
    CHECK(rep.lhs == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(rep.laplacian_term == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(rep.corrections.size() == 1);
    CHECK(rep.corrections[0].value ==
          doctest::Approx(-(std::log(2.0) - 15.0 / 16.0)).epsilon(1e-13));
    CHECK(std::abs(rep.mean_term - 0.0625) < 1e-5);
    CHECK(std::abs(rep.residual) < 1e-5);
}

TEST_CASE("no zeros or poles reduces to the mean value property") {
    const FactoredSlicePreserving f(0, {}, {}, RealCoeffSeries({2.0, 0.1, 0.05}, 1e3));
    const JensenReport rep = jensen_terms_slice_preserving(f, 0.8);
    CHECK(rep.corrections.empty());
    CHECK(std::abs(rep.residual) < 1e-6);
}

TEST_CASE("real zero outside the radius contributes nothing") {
    const FactoredSlicePreserving f(0, {{3.0, 1}}, {});
    const JensenReport rep = jensen_terms_slice_preserving(f, 1.0);
    CHECK(rep.corrections.empty());
    CHECK(std::abs(rep.residual) < 1e-6);
}

TEST_CASE("constant PQL") {
    const PQLFunction f = PQLFunction::constant(Quaternion(0, 3, 0, 4));
    const JensenReport rep = jensen_terms_pql(f, 1.5);
    CHECK(rep.lhs == doctest::Approx(std::log(5.0)).epsilon(1e-14));
    CHECK(rep.laplacian_term == 0.0);
    CHECK(rep.corrections.empty());
    CHECK(std::abs(rep.residual) < 1e-9);
}

TEST_CASE("PQL with a factor outside the radius") {
    // (x-q1)(x-q2)(x-q3), |q2| > rho: only q1, q3 contribute corrections
    const Quaternion q1 = I * 0.4, q2 = Quaternion(2.0, 1, 0, 0), q3 = Quaternion(0.2, 0, 0.5, 0);
    const PQLFunction f({Quaternion(1.0), Quaternion(1.0), Quaternion(1.0), Quaternion(1.0)},
                        {q1, q2, q3}, {1, 1, 1});
    const JensenReport rep = jensen_terms_pql(f, 1.0);
    CHECK(rep.corrections.size() == 2);
    CHECK(std::abs(rep.residual) < 1e-4);
}

TEST_CASE("routing signals") {
    const FactoredSlicePreserving origin(1, {}, {{I, 1}});
    CHECK_THROWS_AS(jensen_terms_slice_preserving(origin, 2.0), OriginSingular);
    const auto boundary = sphere_zero(I);  // |i| = 1 on the rho = 1 sphere
    CHECK_THROWS_AS(jensen_terms_slice_preserving(boundary, 1.0), BoundaryContact);
}

TEST_CASE("origin case: f = x at rho 2, f = x^2 (x-3) at rho 1, f = 1/x") {
    {
        const FactoredSlicePreserving f(1, {}, {});
        const JensenReport rep = origin_case(f, 2.0);
        CHECK(rep.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-14));
        CHECK(rep.origin_k == 1);
        CHECK(std::abs(rep.mean_term - std::log(2.0)) < 1e-9);
        CHECK(std::abs(rep.residual) < 1e-8);
    }
    {
        const FactoredSlicePreserving f(2, {{3.0, 1}}, {});
        const JensenReport rep = origin_case(f, 1.0);
        CHECK(rep.lhs == doctest::Approx(std::log(3.0)).epsilon(1e-13));
        CHECK(std::abs(rep.residual) < 1e-6);
    }
    {
        const FactoredSlicePreserving f(-1, {}, {});
        const JensenReport rep = origin_case(f, 1.0);
        CHECK(rep.lhs == 0.0);
        CHECK(std::abs(rep.residual) < 1e-8);
    }
}

TEST_CASE("origin case for PQL factors at zero") {
    // f = x (x - q) with q inside
    const PQLFunction f({Quaternion(1.0), Quaternion(1.0), Quaternion(1.0)},
                        {Quaternion{}, I * 0.5}, {1, 1});
    const JensenReport rep = origin_case(f, 1.0);
    CHECK(rep.origin_k == 1);
    CHECK(rep.lhs == doctest::Approx(std::log(0.5)).epsilon(1e-13));
    CHECK(std::abs(rep.residual) < 1e-4);
}

TEST_CASE("boundary case keeps the formulas without boundary terms") {
    {
        // sphere of zeros exactly on the boundary
        const auto f = sphere_zero(I);
        const JensenReport rep = boundary_case(f, 1.0);
        CHECK(rep.corrections.empty());
        CHECK(rep.metadata.boundary_extrapolation);
        CHECK(std::abs(rep.residual) < 1e-3);
    }
    {
        // real zero on the boundary: f = x - 1 at rho = 1
        const FactoredSlicePreserving f(0, {{1.0, 1}}, {});
        const JensenReport rep = boundary_case(f, 1.0);
        CHECK(rep.corrections.empty());
        CHECK(rep.lhs == 0.0);
        CHECK(std::abs(rep.residual) < 1e-3);
    }
    {
        // no boundary entries: must agree with the plain engine
        const auto f = sphere_zero(I * 0.5);
        const JensenReport direct = jensen_terms_slice_preserving(f, 1.0);
        const JensenReport extrap = boundary_case(f, 1.0);
        CHECK(std::abs(direct.mean_term - extrap.mean_term) < 2e-4);
        CHECK(std::abs(extrap.residual) < 1e-3);
    }
}

TEST_CASE("cone case bracket signs and reduction") {
    // beta = |alpha|: bracket zero
    CHECK(sphere_bracket(Quaternion(0.5, 0.5, 0, 0)) == 0.0);
    // beta > |alpha|: positive
    CHECK(sphere_bracket(I) > 0.0);
    // beta < |alpha|: negative
    CHECK(sphere_bracket(Quaternion(1.0, 0.5, 0, 0)) < 0.0);

    const Quaternion on_cone = Quaternion(0.4) + I * 0.4;
    const auto f = sphere_zero(on_cone);
    const JensenReport rep = cone_case_report(f, 1.2);
    REQUIRE(rep.corrections.size() == 1);
    const double expected = -std::log(1.2 * 1.2 / on_cone.norm_sq());
    CHECK(rep.corrections[0].value == doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::abs(rep.residual) < 1e-4);

    const auto off_cone = sphere_zero(Quaternion(0.7) + I * 0.2);
    CHECK_THROWS_AS(cone_case_report(off_cone, 1.2), PreconditionFailed);
}

TEST_CASE("mixed products") {
    // parts = [f] alone equals the slice preserving engine
    const auto f = sphere_zero(I * 0.6);
    const JensenReport a = jensen_terms_slice_preserving(f, 1.2);
    const JensenReport b = jensen_mixed({MixedPart{f}}, 1.2);
    CHECK(a.lhs == b.lhs);
    CHECK(a.corrections_sum == doctest::Approx(b.corrections_sum).epsilon(1e-14));
    CHECK(std::abs(a.mean_term - b.mean_term) < 1e-12);

    // parts = [(x-q)] alone equals the PQL engine
    const PQLFunction lin = PQLFunction::linear(J * 0.5);
    const JensenReport c = jensen_terms_pql(lin, 1.0);
    const JensenReport d = jensen_mixed({MixedPart{lin}}, 1.0);
    CHECK(std::abs(c.residual - d.residual) < 1e-12);

    // genuine mix: (x-q1) f(x) (x-q2)^{-1}
    const PQLFunction left = PQLFunction::linear(Quaternion(0.1, 0.3, 0, 0));
    const PQLFunction right = PQLFunction::linear(Quaternion(-0.2, 0, 0.25, 0), -1);
    const JensenReport m = jensen_mixed({MixedPart{left}, MixedPart{f}, MixedPart{right}}, 1.1);
    CHECK(m.corrections.size() == 3);
    CHECK(std::abs(m.residual) < 1e-4);
}

TEST_CASE("auto dispatch routes to the corollaries") {
    const FactoredSlicePreserving with_origin(1, {{0.5, 1}}, {});
    const JensenReport o = jensen_auto(with_origin, 1.2);
    CHECK(o.origin_adjusted);
    const auto on_boundary = sphere_zero(I);
    const JensenReport b = jensen_auto(on_boundary, 1.0);
    CHECK(b.metadata.boundary_extrapolation);
    CHECK(std::abs(o.residual) < 1e-4);
    CHECK(std::abs(b.residual) < 1e-3);
}

TEST_CASE("corrections are separable per entry") {
    // enlarging rho past an entry adds exactly that entry's formula value
    const Quaternion inner = I * 0.4;
    const Quaternion outer = Quaternion(0.0, 0, 1.3, 0);
    const FactoredSlicePreserving f(0, {}, {{inner, 1}, {outer, 2}});
    const double rho_big = 1.6;
    const JensenReport small = jensen_terms_slice_preserving(f, 1.0);
    const JensenReport big = jensen_terms_slice_preserving(f, rho_big);
    REQUIRE(small.corrections.size() == 1);
    REQUIRE(big.corrections.size() == 2);
    LedgerEntry e;
    e.kind = LedgerEntry::Kind::Sphere;
    e.representative = outer;
    e.alpha = 0.0;
    e.beta = 1.3;
    e.multiplicity = 2;
    const double expected_new = jensen_correction_value(e, rho_big);
    double found = 0.0;
    for (const auto& c : big.corrections)
        if (c.source.find("beta=1.3") != std::string::npos) found = c.value;
    CHECK(rel_err(found, expected_new) < 1e-10);

    LedgerEntry e2;
    e2.kind = LedgerEntry::Kind::Sphere;
    e2.representative = inner;
    e2.alpha = 0.0;
    e2.beta = 0.4;
    e2.multiplicity = 1;
    for (const auto& c : big.corrections)
        if (c.source.find("beta=0.4") != std::string::npos)
            CHECK(rel_err(c.value, jensen_correction_value(e2, rho_big)) < 1e-10);
}

TEST_CASE("non-cancellation of spherical vs real correction brackets") {
    QuaternionGen gen(501);
    const double rho = 1.0;
    int draws = 0;
    while (draws < 1000) {
        const Quaternion a =
            Quaternion(gen.real(-0.9, 0.9)) + gen.unit_imaginary() * gen.real(1e-3, 0.9);
        if (a.norm() >= rho) continue;
        const double r = gen.real(1e-3, 0.999);
        const double n2 = a.norm_sq();
        const double sphere_term =
            0.25 * (std::pow(rho, 4) - n2 * n2) / (rho * rho * n2 * n2) * sphere_bracket(a);
        const double real_term = 0.25 * (std::pow(r, 4) - std::pow(rho, 4)) / (rho * rho * r * r);
        CHECK(sphere_term + real_term != 0.0);
        ++draws;
    }
}

TEST_CASE("zero count bound") {
    {
        const auto f = sphere_zero(I * 0.3);
        const ZeroCountBound zb = zero_count_bound(f, 0.5, std::exp(1.0) * 0.5);
        CHECK(zb.n_actual == 1);
        CHECK(zb.bound >= 1.0);
        CHECK(zb.ineqzero_display_missing_half);
    }
    {
        // no zeros: bound must still dominate 0
        const FactoredSlicePreserving f(0, {}, {}, RealCoeffSeries({1.5}, 1e3));
        const ZeroCountBound zb = zero_count_bound(f, 0.5, 1.5);
        CHECK(zb.n_actual == 0);
        CHECK(zb.bound >= -1e-12);
    }
    // poles and off-cone zeros are rejected
    CHECK_THROWS_AS(zero_count_bound(sphere_zero(I * 0.3, -1), 0.5, 1.0), PreconditionFailed);
    CHECK_THROWS_AS(zero_count_bound(sphere_zero(Quaternion(0.5) + I * 0.2), 0.5, 1.0),
                    PreconditionFailed);
}

TEST_CASE("zero count bound on randomized cone instances") {
    QuaternionGen gen(503);
    for (int t = 0; t < 20; ++t) {
        std::vector<SphereFactor> sf;
        const int n = gen.integer(1, 3);
        for (int k = 0; k < n; ++k) {
            const double beta = gen.real(0.15, 0.5);
            const double alpha = gen.real(-1.0, 1.0) * beta;  // inside the cone
            sf.push_back({Quaternion(alpha) + gen.unit_imaginary() * beta, gen.integer(1, 2)});
        }
        const FactoredSlicePreserving f(0, {}, sf);
        const double r = gen.real(0.75, 0.95);
        const double R = r * gen.real(1.8, 3.0);
        const ZeroCountBound zb = zero_count_bound(f, r, R);
        CHECK(zb.n_actual <= zb.bound + 1e-9);
    }
}

TEST_CASE("zero free radius") {
    {
        // guard > 1: vacuous, radius 1
        const FactoredSlicePreserving f(0, {}, {}, RealCoeffSeries({5.0}, 1e3));
        const ZeroFreeRadius zf = zero_free_radius(f);
        CHECK(zf.vacuous);
        CHECK(zf.radius == 1.0);
    }
    {
        // f^s(0) = 1 and vanishing laplacian: radius exactly 1
        const FactoredSlicePreserving f(0, {}, {}, RealCoeffSeries({1.0}, 1e3));
        const ZeroFreeRadius zf = zero_free_radius(f);
        CHECK(zf.guard == doctest::Approx(1.0));
        CHECK(zf.radius == doctest::Approx(1.0));
    }
    {
        const auto f = sphere_zero(I * 0.3);
        const ZeroFreeRadius zf = zero_free_radius(f);
        CHECK_FALSE(zf.vacuous);
        CHECK(zf.radius < 0.3);
        CHECK(zf.ledger_consistent);
    }
}

TEST_CASE("blaschke sphere means and large-r limits") {
    // punctual, a = 1/2, rho = 1, r = 3: log(1/2) + (15/16)/9
    const BlaschkeSpec bp(Quaternion(0.5), 1.0, BlaschkeKind::Punctual);
    CHECK(blaschke_sphere_mean(bp, 3.0) ==
          doctest::Approx(std::log(0.5) + (15.0 / 16.0) / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(blaschke_sphere_mean(bp, 1.5), PreconditionFailed);  // r <= rho^2/|a| = 2

    const Quaternion a(0.2, 0.5, 0.1, 0);
    const BlaschkeSpec bs(a, 1.0, BlaschkeKind::Spherical);
    const double far = 1e3;
    CHECK(std::abs(blaschke_sphere_mean(bp, far) - std::log(0.5)) < 1e-3);
    CHECK(std::abs(blaschke_sphere_mean(bs, far) - 2.0 * std::log(a.norm())) < 1e-3);

    // quadrature cross-check at moderate r
    const double r = 4.0;
    const S3Grid grid({48, 48, 96}, r);
    const double quad_p =
        mean_on_s3([&bp](const Quaternion& y) { return bp.log_abs(y); }, r, grid);
    CHECK(std::abs(quad_p - blaschke_sphere_mean(bp, r)) < 1e-4);
    const double quad_s =
        mean_on_s3([&bs](const Quaternion& y) { return bs.log_abs(y); }, r, grid);
    CHECK(std::abs(quad_s - blaschke_sphere_mean(bs, r)) < 1e-4);
}

TEST_CASE("pql sphere mean closed form") {
    // f = x - j/2 at rho 1: 1/16, matching the Jensen-predicted mean
    const PQLFunction f = PQLFunction::linear(J * 0.5);
    CHECK(pql_sphere_mean(f, 1.0) == doctest::Approx(0.0625).epsilon(1e-12));

    // constant: log|a0|
    CHECK(pql_sphere_mean(PQLFunction::constant(Quaternion(0, 0, 3, 4)), 2.0) ==
          doctest::Approx(std::log(5.0)).epsilon(1e-14));

    // f = 2(x - i/2): log 2 plus the q = i/2 value, against quadrature
    const PQLFunction g = PQLFunction::linear(I * 0.5, 1, Quaternion(2.0));
    const double closed = pql_sphere_mean(g, 1.0);
    const double quad = mean_on_s3([&g](const Quaternion& y) { return g.log_abs(y); }, 1.0,
                                   S3Grid({48, 48, 96}, 1.0));
    CHECK(std::abs(closed - quad) < 1e-4);
    CHECK(closed == doctest::Approx(std::log(2.0) + 0.0625).epsilon(1e-12));

    CHECK_THROWS_AS(pql_sphere_mean(PQLFunction::linear(I * 2.0), 1.0), PreconditionFailed);
}

TEST_CASE("Jensen regression set with Monte-Carlo oracle means") {
    QuaternionGen gen(507);
    int cases_done = 0;
    while (cases_done < 10) {
        const double rho = gen.real(0.8, 1.6);
        std::vector<RealFactor> rf;
        std::vector<SphereFactor> sf;
        if (gen.integer(0, 1))
            rf.push_back({gen.real(0.2, 0.7) * rho * (gen.integer(0, 1) ? 1 : -1),
                          gen.integer(0, 1) ? 1 : -1});
        sf.push_back({Quaternion(gen.real(-0.4, 0.4) * rho) +
                          gen.unit_imaginary() * gen.real(0.25, 0.7) * rho,
                      gen.integer(0, 1) ? 1 : -1});
        const FactoredSlicePreserving f(0, rf, sf);
        // boundary clearance >= 0.05 rho
        bool clear = true;
        for (const auto& e : f.ledger().entries)
            clear = clear && std::abs(e.modulus() - rho) > 0.05 * rho && e.modulus() > 0.05 * rho;
        if (!clear) continue;
        const JensenReport rep = jensen_terms_slice_preserving(f, rho);
        CHECK(std::abs(rep.residual) < 1e-4);
        const auto mc = mc_mean_on_s3([&f](const Quaternion& y) { return f.log_abs(y); }, rho,
                                      1'000'000, 900 + cases_done);
        CHECK(std::abs(rep.mean_term - mc.mean) < 3.0 * mc.std_error + 1e-6);
        ++cases_done;
    }
}
