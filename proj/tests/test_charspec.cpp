#include <doctest.h>

#include <cmath>
#include <random>

#include "degwave/charspec.hpp"
#include "oracles.hpp"

using namespace degwave;

namespace {

CharContext reference_ctx(double m = 2.0, double D = 1.0, double r = 1.0) {
    return make_char_context(make_spec(m, D, r, BirthLaw::nicholson(4.0, 0.5, 1.0),
                                       DeathLaw::linear(0.5)));
}

} // namespace

TEST_SUITE_BEGIN("charspec");

TEST_CASE("chi0 closed forms") {
    CharContext ctx0 = reference_ctx(2.0, 1.0, 0.0);
    // r = 0: 4 - 2 lambda - 0.5 vanishes at lambda = 1.75
    CHECK(chi0(ctx0, 2.0, 1.75) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(chi0(ctx0, 2.0, 0.0) == doctest::Approx(3.5));

    CharContext ctx1 = reference_ctx(2.0, 1.0, 1.0);
    CHECK(std::fabs(chi0(ctx1, 1.0, 0.9885)) < 1e-3);
    CHECK_THROWS_AS(chi0(ctx1, 0.0, 1.0), DomainError);
}

TEST_CASE("lambda0 is the omega_r rescaling") {
    CharContext ctx0 = reference_ctx(2.0, 1.0, 0.0);
    CHECK(lambda0(ctx0, 2.0) == doctest::Approx(3.5 / 2.0).epsilon(1e-13));

    CharContext ctx1 = reference_ctx();
    // oracle: plain bisection of 4 e^{-w} = w + 0.5
    double wr = oracles::bisect(
        [](double w) { return 4.0 * std::exp(-w) - w - 0.5; }, 0.0, 3.5);
    CHECK(lambda0(ctx1, 1.0) == doctest::Approx(wr).epsilon(1e-10));
    CHECK(wr == doctest::Approx(0.98851522876).epsilon(1e-9));

    // omega_r strictly decreasing in r
    CharContext a = reference_ctx(2.0, 1.0, 0.5);
    CharContext b = reference_ctx(2.0, 1.0, 2.0);
    CHECK(omega_r(a) > omega_r(b));

    // residual and bracket over a random (c, r) cloud
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uc(0.1, 10.0), ur(0.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        double c = uc(rng);
        CharContext ctx = reference_ctx(2.0, 1.0, ur(rng));
        double lam = lambda0(ctx, c);
        CHECK(std::fabs(chi0(ctx, c, lam)) < 1e-10);
    }
}

TEST_CASE("chik reduces to the quadratic at r = 0") {
    CharContext ctx = reference_ctx(2.0, 1.0, 0.0);
    double A = ctx.a_kappa;
    double gap = ctx.consts.bpk - ctx.consts.dpk;
    CHECK(gap < 0.0);
    CHECK(chik(ctx, 1.0, 0.0) == doctest::Approx(gap).epsilon(1e-12));
    double c = 1.3;
    double disc = std::sqrt(c * c - 4.0 * A * gap);
    double lam_minus = (c - disc) / (2.0 * A);
    double lam_plus = (c + disc) / (2.0 * A);
    CHECK(chik(ctx, c, lam_minus) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(chik(ctx, c, lam_plus) == doctest::Approx(0.0).epsilon(1e-12));

    // complex overload agrees with the real one on the real axis
    std::complex<double> z = chik(reference_ctx(), 1.0, std::complex<double>(-0.7, 0.0));
    CHECK(z.real() == doctest::Approx(chik(reference_ctx(), 1.0, -0.7)).epsilon(1e-14));
    CHECK(z.imag() == 0.0);
}

TEST_CASE("omega_kappa and mu_kappa against the frozen oracle values") {
    CharContext ctx = reference_ctx();
    MuKappa mk = mu_kappa(ctx);
    // oracle: bisection of 2 d'(k) = b'(k) e^{-w} (2+w) on (-40, -2)
    double B = ctx.consts.bpk, E = ctx.consts.dpk;
    double wk = oracles::bisect(
        [&](double w) { return B * std::exp(-w) * (2.0 + w) - 2.0 * E; }, -40.0, -2.0);
    CHECK(mk.omega_kappa == doctest::Approx(wk).epsilon(1e-10));
    CHECK(mk.omega_kappa == doctest::Approx(-2.2044).epsilon(1e-3 / 2.2044));
    CHECK(mk.omega_kappa < -2.0);
    CHECK(mk.mu == doctest::Approx(2.7378).epsilon(1e-3));
    CHECK(2.0 * ctx.a_kappa * mk.omega_kappa / B > 0.0);  // radicand positivity

    CharContext mono = make_char_context(
        make_spec(2.0, 1.0, 1.0, BirthLaw::linear(1.0), DeathLaw::quadratic(1.0)));
    CHECK_THROWS_AS(mu_kappa(mono), DomainError);
}

TEST_CASE("c_kappa: double-root certificate and root-count flip") {
    CharContext ctx = reference_ctx();
    CKappaResult ck = find_c_kappa(ctx);
    REQUIRE(std::isfinite(ck.c));
    CHECK(ck.verified);
    CHECK(ck.lambda_double < 0.0);
    CHECK(std::fabs(chik(ctx, ck.c, ck.lambda_double)) < 1e-8);
    CHECK(std::fabs(chik_dlambda(ctx, ck.c, ck.lambda_double)) < 1e-8);
    CHECK(count_chik_negative_roots(ctx, 0.99 * ck.c, ck.lambda_double) >= 2);
    CHECK(count_chik_negative_roots(ctx, 1.01 * ck.c, ck.lambda_double) == 0);

    // r = 0 and monotone-near-kappa regimes return +inf
    CHECK(std::isinf(find_c_kappa(reference_ctx(2.0, 1.0, 0.0)).c));
    CharContext mono = make_char_context(
        make_spec(2.0, 1.0, 1.0, BirthLaw::linear(1.0), DeathLaw::quadratic(1.0)));
    CHECK(std::isinf(find_c_kappa(mono).c));

    // c_kappa decreasing in r
    CKappaResult ck5 = find_c_kappa(reference_ctx(2.0, 1.0, 5.0));
    REQUIRE(std::isfinite(ck5.c));
    CHECK(ck5.c < ck.c);
}

TEST_CASE("c_star branch scan, mu_star and the +inf case split") {
    // reference model: b'(k) = -0.5397 < -d'(k) = -0.5, so c_star becomes
    // finite once r exceeds pi/|b'(k)| and the first sin branch opens
    CHECK(std::isinf(find_c_star(reference_ctx(2.0, 1.0, 1.0)).c));
    CharContext ctx = reference_ctx(2.0, 1.0, 20.0);
    CStarResult cs = find_c_star(ctx);
    REQUIRE(std::isfinite(cs.c));
    CHECK(cs.sigma > 0.0);
    CHECK(cs.y * 20.0 > 0.5 * 3.14159);  // crossing lands past the first quadrant
    CHECK(mu_star(ctx) == doctest::Approx(45.4615660604).epsilon(1e-9));

    // b'(kappa) >= -d'(kappa) gives +inf
    CharContext mild = make_char_context(make_spec(
        2.0, 1.0, 1.0, BirthLaw::nicholson(4.0, 0.5, 1.0), DeathLaw::linear(1.0)));
    CHECK(mild.consts.bpk < 0.0);
    CHECK(mild.consts.bpk >= -mild.consts.dpk);
    CHECK(std::isinf(find_c_star(mild).c));

    // c_star >= c_kappa wherever both are computed
    for (double m : {1.5, 2.0, 3.0}) {
        for (double r : {1.0, 5.0, 20.0}) {
            CharContext g = reference_ctx(m, 1.0, r);
            double ck = find_c_kappa(g).c;
            double cst = find_c_star(g).c;
            if (std::isfinite(ck) && std::isfinite(cst)) CHECK(cst >= ck * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("large-delay asymptotics of both thresholds") {
    CharContext ctx = reference_ctx(2.0, 1.0, 100.0);
    MuKappa mk = mu_kappa(ctx);
    CKappaResult ck = find_c_kappa(ctx);
    REQUIRE(std::isfinite(ck.c));
    CHECK(100.0 * ck.c / mk.mu == doctest::Approx(1.0).epsilon(0.05));
    CStarResult cs = find_c_star(ctx);
    REQUIRE(std::isfinite(cs.c));
    CHECK(100.0 * cs.c / mu_star(ctx) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("lower_bound_speed: positivity and 1/r scaling") {
    CharContext ctx = reference_ctx();
    LowerBoundSpeed lb = lower_bound_speed(ctx);
    CHECK(lb.cdot > 0.0);
    CHECK(lb.c1 > 0.0);
    CHECK(lb.c2 > 0.0);
    CHECK(lb.delta > 0.0);
    CHECK(lb.eps > 0.0);
    CHECK(lb.eps < lb.zeta0);
    CHECK(lb.C1 >= lb.cbar);
    CHECK(lb.mu0 == doctest::Approx(lb.c1 * 1.0));

    LowerBoundSpeed lb10 = lower_bound_speed(reference_ctx(2.0, 1.0, 10.0));
    LowerBoundSpeed lb100 = lower_bound_speed(reference_ctx(2.0, 1.0, 100.0));
    CHECK(lb10.cdot * 10.0 / (lb100.cdot * 100.0) == doctest::Approx(1.0).epsilon(0.10));

    CHECK_THROWS_AS(lower_bound_speed(reference_ctx(2.0, 1.0, 0.0)), DomainError);
}

TEST_SUITE_END();
