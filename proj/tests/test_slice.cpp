#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diffops.hpp"
#include "factored.hpp"
#include "series.hpp"
#include "test_common.hpp"

using namespace qjensen;
using qjtest::QuaternionGen;
using qjtest::rel_err;

namespace {
const Quaternion I = Quaternion::unit_i();
const Quaternion J = Quaternion::unit_j();
const Quaternion K = Quaternion::unit_k();

QuatCoeffSeries linear(const Quaternion& q) {
    return QuatCoeffSeries({-q, Quaternion(1.0)});
}
}

TEST_CASE("characteristic polynomial coefficients") {
    const auto ci = characteristic_polynomial(I);
    CHECK(ci.coefficients == std::vector<double>{1.0, 0.0, 1.0});  // x^2 + 1
    const auto cj = characteristic_polynomial(Quaternion(1, 0, 1, 0));
    CHECK(cj.coefficients == std::vector<double>{2.0, -2.0, 1.0});  // x^2 - 2x + 2
    const auto cr = characteristic_polynomial(Quaternion(3.0));
    CHECK(cr.coefficients == std::vector<double>{9.0, -6.0, 1.0});  // (x-3)^2
}

TEST_CASE("star product worked examples") {
    // (x-i)*(x-j) = x^2 - x(i+j) + k
    const auto p = star_product(linear(I), linear(J));
    REQUIRE(p.coefficients.size() == 3);
    CHECK(dist(p.coefficients[0], K) == 0.0);
    CHECK(dist(p.coefficients[1], -(I + J)) == 0.0);
    CHECK(dist(p.coefficients[2], Quaternion(1.0)) == 0.0);

    // (x-i)*(x-2i) = x^2 - 3xi - 2
    const auto q = star_product(linear(I), linear(I * 2.0));
    REQUIRE(q.coefficients.size() == 3);
    CHECK(dist(q.coefficients[0], Quaternion(-2.0)) == 0.0);
    CHECK(dist(q.coefficients[1], I * -3.0) == 0.0);

    // identity
    const auto f = QuatCoeffSeries({K, I + J, Quaternion(2.0)});
    const auto fid = star_product(f, QuatCoeffSeries({Quaternion(1.0)}));
    REQUIRE(fid.coefficients.size() == f.coefficients.size());
    for (std::size_t n = 0; n < f.coefficients.size(); ++n)
        CHECK(dist(fid.coefficients[n], f.coefficients[n]) == 0.0);
}

TEST_CASE("star_eval against the composition formula") {
    // P_{i,j} vanishes only at i
    CHECK(star_eval(linear(I), linear(J), I).norm() == 0.0);
    // at x = j the value matches the convolution-form polynomial
    const auto p = star_product(linear(I), linear(J));
    const Quaternion via_poly = p.eval(J);
    const Quaternion via_comp = star_eval(linear(I), linear(J), J);
    CHECK(dist(via_poly, via_comp) < 1e-14);
    CHECK(dist(via_poly, K * 2.0) < 1e-15);  // direct arithmetic: j^2 - j(i+j) + k = 2k

    // g = 1 gives back f(x)
    QuaternionGen gen(5);
    const auto f = QuatCoeffSeries({gen.uniform(), gen.uniform(), gen.uniform()});
    for (int t = 0; t < 50; ++t) {
        const Quaternion x = gen.uniform(-2, 2);
        CHECK(dist(star_eval(f, QuatCoeffSeries({Quaternion(1.0)}), x), f.eval(x)) < 1e-12);
    }
}

TEST_CASE("star_eval agrees with star_product then evaluate") {
    QuaternionGen gen(7);
    for (int t = 0; t < 100; ++t) {
        const QuatCoeffSeries f({gen.uniform(), gen.uniform(), gen.uniform()});
        const QuatCoeffSeries g({gen.uniform(), gen.uniform()});
        const Quaternion x = gen.uniform(-1.5, 1.5);
        const Quaternion a = star_product(f, g).eval(x);
        const Quaternion b = star_eval(f, g, x);
        CHECK(dist(a, b) <= 1e-10 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("conjugate and symmetrization") {
    const auto conj = conjugate_series(linear(I));
    CHECK(dist(conj.coefficients[0], I) == 0.0);  // (x-i)^c = x+i
    CHECK(dist(conj.coefficients[1], Quaternion(1.0)) == 0.0);

    const auto sym = symmetrize(linear(I));
    CHECK(sym.coefficients == std::vector<double>{1.0, 0.0, 1.0});  // x^2+1

    // symmetrize((x-i)*(x-j)) = (x^2+1)^2
    const auto sym2 = symmetrize(star_product(linear(I), linear(J)));
    CHECK(sym2.coefficients == std::vector<double>{1.0, 0.0, 2.0, 0.0, 1.0});

    // (f*g)^c = g^c * f^c coefficient-wise on exact integer cases
    const QuatCoeffSeries f({K, I * 2.0, Quaternion(1.0)});
    const QuatCoeffSeries g({J * -1.0, Quaternion(3.0)});
    const auto lhs = conjugate_series(star_product(f, g));
    const auto rhs = star_product(conjugate_series(g), conjugate_series(f));
    REQUIRE(lhs.coefficients.size() == rhs.coefficients.size());
    for (std::size_t n = 0; n < lhs.coefficients.size(); ++n)
        CHECK(dist(lhs.coefficients[n], rhs.coefficients[n]) == 0.0);
}

TEST_CASE("pointwise vs convolution for slice-preserving left factor") {
    QuaternionGen gen(13);
    for (int t = 0; t < 100; ++t) {
        RealCoeffSeries fr({gen.real(-2, 2), gen.real(-2, 2), gen.real(-2, 2)});
        const QuatCoeffSeries f = QuatCoeffSeries::from_real(fr);
        const QuatCoeffSeries g({gen.uniform(), gen.uniform(), gen.uniform()});
        const Quaternion x = gen.uniform(-1.5, 1.5);
        const Quaternion prod = star_product(f, g).eval(x);
        const Quaternion pointwise = f.eval(x) * g.eval(x);
        CHECK(dist(prod, pointwise) <= 1e-11 * std::max(1.0, pointwise.norm()));
    }
}

TEST_CASE("zero containment Z(f) in Z(f*g)") {
    QuaternionGen gen(19);
    for (int t = 0; t < 50; ++t) {
        const Quaternion root = gen.uniform(-2, 2);
        const QuatCoeffSeries f = linear(root);
        const QuatCoeffSeries g({gen.uniform(), gen.uniform(), gen.uniform()});
        CHECK(star_eval(f, g, root).norm() < 1e-13);
        CHECK(star_product(f, g).eval(root).norm() < 1e-12 * std::max(1.0, g.eval(root).norm()));
    }
}

TEST_CASE("spherical derivative and value") {
    auto ident = [](const Quaternion& x) { return x; };
    auto conj_fn = [](const Quaternion& x) { return x.conj(); };
    auto norm2 = [](const Quaternion& x) { return x * x.conj(); };

    QuaternionGen gen(29);
    for (int t = 0; t < 50; ++t) {
        Quaternion x = gen.uniform(-2, 2);
        if (x.im().norm() < 1e-2) x = x + J;  // keep away from the real axis
        CHECK(dist(spherical_derivative(ident, x), Quaternion(1.0)) < 1e-13);
        CHECK(dist(spherical_derivative(conj_fn, x), Quaternion(-1.0)) < 1e-13);
        CHECK(spherical_derivative(norm2, x).norm() < 1e-12 * std::max(1.0, x.norm_sq()));
        CHECK(dist(spherical_value(ident, x), Quaternion(x.re())) < 1e-14 * std::max(1.0, x.norm()));
    }
    CHECK_THROWS_AS(spherical_derivative(ident, Quaternion(2.0)), DomainError);
}

TEST_CASE("spherical derivative is constant on each sphere and kills itself") {
    QuaternionGen gen(31);
    const QuatCoeffSeries f({gen.uniform(), gen.uniform(), gen.uniform(), gen.uniform()});
    auto eval = [&f](const Quaternion& x) { return f.eval(x); };
    for (int t = 0; t < 25; ++t) {
        const double alpha = gen.real(-1, 1), beta = gen.real(0.2, 1.5);
        const Quaternion x1 = Quaternion(alpha) + gen.unit_imaginary() * beta;
        const Quaternion x2 = Quaternion(alpha) + gen.unit_imaginary() * beta;
        CHECK(dist(spherical_derivative(eval, x1), spherical_derivative(eval, x2)) < 1e-12);
        auto ds = [&](const Quaternion& y) { return spherical_derivative(eval, y); };
        CHECK(spherical_derivative(ds, x1).norm() < 1e-10);
    }
}

TEST_CASE("slice derivatives of series") {
    const QuatCoeffSeries sq({Quaternion{}, Quaternion{}, Quaternion(1.0)});  // x^2
    const Quaternion x(1, 0, 0, 1);                                           // 1 + k
    CHECK(dist(slice_derivative(sq, x), x * 2.0) < 1e-14);
    CHECK(slice_derivative(sq, x, SliceDerivative::Conjugate).norm() == 0.0);

    // d_c (x-a)^s = 2x - (a + a^c)
    QuaternionGen gen(37);
    for (int t = 0; t < 25; ++t) {
        const Quaternion a = gen.nonzero();
        const auto cp = QuatCoeffSeries::from_real(characteristic_polynomial(a));
        const Quaternion x = gen.uniform(-2, 2);
        CHECK(dist(slice_derivative(cp, x), x * 2.0 - Quaternion(2.0 * a.re())) < 1e-13);
    }
}

TEST_CASE("Cauchy-Fueter bridge for regular series") {
    QuaternionGen gen(41);
    const FDConfig cfg;
    for (int t = 0; t < 10; ++t) {
        const QuatCoeffSeries f({gen.uniform(), gen.uniform(), gen.uniform(), gen.uniform()});
        auto eval = [&f](const Quaternion& x) { return f.eval(x); };
        Quaternion x = gen.uniform(-1, 1);
        if (x.im().norm() < 0.3) x = x + J * 0.7;
        const Quaternion dcf = cauchy_fueter_fd(eval, x, CauchyFueter::D, cfg);
        const Quaternion ds = spherical_derivative(eval, x);
        // regular: dbar_c f = 0, so D_CF f = -2 d_s f
        CHECK(dist(dcf, ds * -2.0) < 1e-8 * std::max(1.0, ds.norm()));
    }
}

TEST_CASE("numeric harmonicity of the spherical derivative") {
    QuaternionGen gen(43);
    const QuatCoeffSeries f({gen.uniform(), gen.uniform(), gen.uniform(), gen.uniform()});
    auto eval = [&f](const Quaternion& x) { return f.eval(x); };
    FDConfig cfg;
    cfg.h = 5e-3;
    for (int t = 0; t < 8; ++t) {
        Quaternion x = gen.uniform(-1, 1);
        if (x.im().norm() < 0.5) x = x + K * 0.8;  // FD stencil must stay off the real axis
        for (int c = 0; c < 4; ++c) {
            auto comp = [&](const Quaternion& y) {
                return spherical_derivative(eval, y).coords()[c];
            };
            CHECK(std::abs(laplacian_fd(comp, x, cfg)) < 2e-5);
        }
    }
}

TEST_CASE("real series induce slice-preserving evaluation") {
    QuaternionGen gen(47);
    const RealCoeffSeries f({0.5, -1.0, 2.0, 0.25});
    for (int t = 0; t < 50; ++t) {
        const double alpha = gen.real(-1.5, 1.5), beta = gen.real(0.0, 1.5);
        const Quaternion Iu = gen.unit_imaginary();
        const Quaternion x = Quaternion(alpha) + Iu * beta;
        const Quaternion v = f.eval(x);
        // value lies in the slice C_I of x: imaginary part parallel to I
        const Quaternion cross = v.im() * Iu - Iu * v.im();
        CHECK(cross.norm() < 1e-12 * std::max(1.0, v.norm()));
        // agrees with the real Horner on the real axis
        CHECK(std::abs(f.eval(Quaternion(alpha)).re() - f.eval_real(alpha)) < 1e-13);
    }
}
