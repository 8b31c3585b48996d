#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "chitwist/transforms.hpp"

using namespace chitwist;

TEST_CASE("smooth windows") {
    SmoothWindow bump(WindowKind::bump_on_1_2);
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(2.0) == 0.0);
    CHECK(bump(1.5) == 1.0);
    CHECK(bump(0.99) == 0.0);

    SmoothWindow plateau(WindowKind::plateau_half_3);
    for (double x : {1.0, 1.25, 1.5, 1.75, 2.0}) CHECK(plateau(x) == 1.0);
    CHECK(plateau(0.5) == 0.0);
    CHECK(plateau(3.0) == 0.0);
    CHECK(plateau(0.75) > 0.0);
    CHECK(plateau(0.75) < 1.0);

    for (int j = 0; j <= 4; ++j) {
        CHECK(bump.derivative_bound(j) > 0.0);
        CHECK(std::isfinite(bump.derivative_bound(j)));
    }
    CHECK(bump.derivative_bound(0) <= 1.3);
    CHECK_THROWS_AS(bump.derivative_bound(5), PreconditionViolated);
}

TEST_CASE("bessel_j agrees with the reference implementation across branches") {
    for (int n : {0, 1, 5, 11, 25}) {
        double xc = bessel_crossover(n);
        for (double x : {0.1, 1.0, 7.9, 8.1, 20.0, 59.5, 60.5, xc - 0.5, xc + 0.5, 300.0, 2500.0}) {
            double mine = bessel_j(n, x);
            double ref = std::cyl_bessel_j(static_cast<double>(n), x);
            REQUIRE(std::abs(mine - ref) < 5e-13);
        }
    }
    CHECK(bessel_j(11, 0.0) == 0.0);
    CHECK(bessel_j(0, 0.0) == 1.0);
}

TEST_CASE("bessel_j satisfies the three-term recurrence at branch boundaries") {
    // J_{n-1}(x) + J_{n+1}(x) = (2n/x) J_n(x); picks up any branch
    // mismatch without relying on an external oracle.
    for (int n : {1, 5, 11, 25}) {
        for (double x : {7.95, 8.05, bessel_crossover(n) - 0.1, bessel_crossover(n) + 0.1, 1000.0}) {
            double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
            double rhs = (2.0 * n / x) * bessel_j(n, x);
            REQUIRE(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("delta_expand pinned cases") {
    CHECK(std::abs(delta_expand(0, 7) - 1.0) < 1e-10);
    CHECK(std::abs(delta_expand(3, 7)) < 1e-9);
    CHECK(std::abs(delta_expand(-3, 7) - delta_expand(3, 7)) < 1e-15);
    CHECK(std::abs(delta_expand(DeltaConfig{0, 31.0}) - 1.0) < 1e-10);
    CHECK_THROWS_AS(delta_expand(0, 0.5), PreconditionViolated);
    // Non-integer Q still partitions the circle exactly.
    for (double Q : {1.0, 1.5, 2.7, 10.3}) CHECK(std::abs(delta_expand(0, Q) - 1.0) < 1e-12);
}

TEST_CASE("delta_expand equals the Kronecker delta on the full grid") {
    for (double Q : {3.0, 7.0, 15.0, 31.0}) {
        for (i64 n = -100; n <= 100; ++n) {
            double expect = (n == 0) ? 1.0 : 0.0;
            REQUIRE(std::abs(delta_expand(n, Q) - expect) < 1e-8);
        }
    }
}

TEST_CASE("poisson summation for the Gaussian family") {
    auto g = gaussian_test_function();
    auto self_dual = poisson_verify(g);
    CHECK(self_dual.rel_err < 1e-12);

    // e^{-pi x^2/4}: dual side has the closed form sum 2 e^{-4 pi m^2}.
    auto scaled = poisson_verify(g, 0.0, 2.0);
    double closed = 2.0;
    for (int m = 1; m < 12; ++m) closed += 4.0 * std::exp(-4.0 * std::numbers::pi * m * m);
    CHECK(scaled.rel_err < 1e-12);
    CHECK(std::abs(scaled.rhs.real() - closed) < 1e-12);

    for (auto [shift, scale] : {std::pair{0.5, 1.0}, {1.0 / 3.0, 1.7}, {0.25, 0.8}}) {
        auto rep = poisson_verify(g, shift, scale);
        REQUIRE(rep.rel_err < 1e-10);
    }
}

TEST_CASE("poisson summation for the bump window via quadrature transform") {
    SmoothWindow w(WindowKind::bump_on_1_2);
    auto rep = poisson_verify(window_test_function(w), 0.3, 3.0);
    CHECK(std::abs(rep.lhs) > 1.0); // three interior integers contribute
    CHECK(rep.rel_err < 1e-8);
}

TEST_CASE("poisson rejects test functions whose sums do not converge") {
    SchwartzFunction slow;
    slow.name = "lorentzian";
    slow.f = [](double x) { return 1.0 / (1.0 + x * x); };
    slow.fhat = [](double y) {
        return cdouble(std::numbers::pi * std::exp(-2.0 * std::numbers::pi * std::abs(y)), 0.0);
    };
    CHECK_THROWS_AS(poisson_verify(slow), NonConvergent);
}

TEST_CASE("oscillatory_quadrature pinned cases") {
    auto one = [](double) { return 1.0; };
    CHECK(std::abs(oscillatory_quadrature(one, [](double) { return 0.0; }, 0.0, 1.0).value -
                   cdouble(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(oscillatory_quadrature(one, [](double x) { return 10.0 * x; }, 0.0, 1.0).value) <
          1e-13);

    // Self-consistency at two resolutions for a chirp under a bump.
    SmoothWindow bump(WindowKind::bump_on_1_2);
    auto amp = [&](double x) { return bump(x); };
    auto phase = [](double x) { return 30.0 * x * x; };
    QuadratureOptions coarse, fine;
    fine.min_panels = 64;
    cdouble a = oscillatory_quadrature(amp, phase, 1.0, 2.0, coarse).value;
    cdouble b = oscillatory_quadrature(amp, phase, 1.0, 2.0, fine).value;
    CHECK(std::abs(a - b) < 1e-9);

    QuadratureOptions tiny;
    tiny.max_nodes = 64;
    CHECK_THROWS_AS(oscillatory_quadrature(amp, [](double x) { return 1000.0 * x; }, 1.0, 2.0, tiny),
                    QuadratureFailure);
}

TEST_CASE("bessel transform H: vanishing at 0, self-consistency, decay") {
    SmoothWindow win(WindowKind::bump_on_1_2);
    double X = 400.0;
    auto h = [&](double x) { return win(x / X); };

    // J_11 vanishes at 0, so H(y) -> 0 as y -> 0+.
    CHECK(std::abs(bessel_transform_H(h, X, 2 * X, 1e-12, 12)) < 1e-30);

    // Independent oracle: direct x-space Simpson at high resolution.
    auto hb = [&](double x) { return win(x); };
    double y = 1.0;
    double lib = bessel_transform_H(hb, 1.0, 2.0, y, 12);
    double acc = 0.0;
    const int m = 200001;
    for (int i = 0; i < m; ++i) {
        double x = 1.0 + i / static_cast<double>(m - 1);
        double w = (i == 0 || i == m - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * win(x) * bessel_j(11, 4.0 * std::numbers::pi * std::sqrt(x * y));
    }
    acc /= 3.0 * (m - 1);
    CHECK(std::abs(lib - acc) < 1e-9);

    // Repeated integration by parts forces decay in y.
    double h2 = std::abs(bessel_transform_H(hb, 1.0, 2.0, 1e2, 12));
    double h4 = std::abs(bessel_transform_H(hb, 1.0, 2.0, 1e4, 12));
    CHECK(h4 * 10.0 < h2);
}

TEST_CASE("voronoi identity for the discriminant form") {
    CuspForm delta(12, 21000);
    SmoothWindow win(WindowKind::bump_on_1_2);

    SECTION("q = 1 reduces to Hankel self-consistency") {
        auto rep = voronoi_verify(delta, 1, 1, win, 200.0);
        CHECK(rep.rel_err < 1e-6);
    }

    SECTION("q = 5, a = 2, X = 200") {
        auto rep = voronoi_verify(delta, 2, 5, win, 200.0);
        CHECK(rep.rel_err < 1e-6);
    }

    SECTION("periodicity in a") {
        auto r1 = voronoi_verify(delta, 2, 5, win, 200.0);
        auto r2 = voronoi_verify(delta, 7, 5, win, 200.0);
        CHECK(r1.lhs == r2.lhs);
        CHECK(r1.rhs == r2.rhs);
    }

    SECTION("insufficient truncation is refused") {
        CHECK_THROWS_AS(voronoi_verify(delta, 2, 5, win, 200.0, 5), TruncationInsufficient);
    }

    SECTION("cache too small") {
        CuspForm small(12, 500);
        CHECK_THROWS_AS(voronoi_verify(small, 2, 5, win, 200.0), SizeLimit);
    }

    SECTION("shared table matches per-call table") {
        i64 T = default_voronoi_truncation(3, 200.0);
        auto table = make_hankel_table(12, win, 200.0, 3, 2 * T);
        auto with = voronoi_verify(delta, 1, 3, win, 200.0, 0, &table);
        auto without = voronoi_verify(delta, 1, 3, win, 200.0);
        CHECK(with.rhs == without.rhs);
    }
}

TEST_CASE("nonstationary decay ladders") {
    SmoothWindow bump(WindowKind::bump_on_1_2);
    auto amp = [&](double x) { return bump(x); };
    std::vector<double> ladder{10, 20, 40, 80};

    auto linear_family = [](double B) {
        return [B](double x) { return B * x; };
    };
    auto rep1 = nonstationary_bound_check(amp, linear_family, 1.0, 2.0, ladder, 1);
    CHECK(rep1.passed);

    auto curved_family = [](double B) {
        return [B](double x) { return B * (x + x * x / 10.0); };
    };
    auto rep2 = nonstationary_bound_check(amp, curved_family, 1.0, 2.0, ladder, 2);
    CHECK(rep2.passed);

    auto zero_amp = [](double) { return 0.0; };
    auto rep3 = nonstationary_bound_check(zero_amp, linear_family, 1.0, 2.0, ladder, 1);
    CHECK(rep3.passed);
    CHECK(std::abs(rep3.lhs) == 0.0);
}

TEST_CASE("stationary phase main term against quadrature") {
    SmoothWindow g(WindowKind::bump_on_1_2);
    auto amp = [&](double x) { return g(x); };

    double rel_at[2] = {0.0, 0.0};
    int slot = 0;
    for (double T : {1e3, 1e4}) {
        PhaseSpec ph;
        ph.f = [T](double x) { return T * (x - 1.5) * (x - 1.5); };
        ph.df = [T](double x) { return 2.0 * T * (x - 1.5); };
        ph.d2f = [T](double) { return 2.0 * T; };
        HuxleyBounds hb{T / 2.0, 0.5, 0.2};
        auto res = stationary_phase_main_term(amp, ph, 1.0, 2.0, hb);
        auto quad = oscillatory_quadrature(amp, ph.f, 1.0, 2.0);
        double disc = std::abs(res.main_term - quad.value);
        REQUIRE(disc <= res.error_budget);
        rel_at[slot++] = disc / std::abs(res.main_term);
        CHECK(std::abs(res.x0 - 1.5) < 1e-10);
    }
    // Relative discrepancy must shrink by at least 2.5x from T=1e3 to 1e4.
    CHECK(rel_at[0] / rel_at[1] >= 2.5);

    PhaseSpec monotone;
    monotone.f = [](double x) { return 40.0 * x; };
    monotone.df = [](double) { return 40.0; };
    monotone.d2f = [](double) { return 0.0; };
    CHECK_THROWS_AS(stationary_phase_main_term(amp, monotone, 1.0, 2.0, HuxleyBounds{}),
                    NoStationaryPoint);

    PhaseSpec wavy;
    wavy.f = [](double x) { return std::cos(2.0 * std::numbers::pi * x); };
    wavy.df = [](double x) { return -2.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * x); };
    wavy.d2f = [](double x) {
        return -4.0 * std::numbers::pi * std::numbers::pi * std::cos(2.0 * std::numbers::pi * x);
    };
    CHECK_THROWS_AS(stationary_phase_main_term(amp, wavy, 0.2, 1.3, HuxleyBounds{}),
                    MultipleStationaryPoints);
}

TEST_CASE("dual-sum integral bound") {
    // Tiny pinned case: bound with C = 20 holds.
    auto rep = voronoi_J_bound_check(1, 100.0, 2, 2, 3);
    CHECK(rep.passed);
    CHECK(std::abs(rep.rhs.real() - 20.0 * 9.0 * 2.0 / std::sqrt(100.0)) < 1e-12);

    // Quadrupling n at least halves the integral in the decay range.
    auto r8 = voronoi_J_bound_check(8, 100.0, 2, 2, 3);
    auto r32 = voronoi_J_bound_check(32, 100.0, 2, 2, 3);
    CHECK(std::abs(r32.lhs) * 2.0 <= std::abs(r8.lhs));

    // Far beyond p^{l+1} the integral is negligible against the peak.
    double peak = 0.0;
    for (i64 n = 1; n <= 30; ++n)
        peak = std::max(peak, std::abs(voronoi_J_bound_check(n, 100.0, 2, 2, 3).lhs));
    auto far = voronoi_J_bound_check(5000, 100.0, 2, 2, 3);
    CHECK(std::abs(far.lhs) < 1e-6 * peak);

    CHECK_THROWS_AS(voronoi_J_bound_check(1, 4.0, 2, 2, 3), PreconditionViolated);
}

TEST_CASE("verification report plumbing") {
    CHECK(relative_error({0, 0}, {0, 0}) == 0.0);
    CHECK(relative_error({1, 0}, {1, 0}) == 0.0);
    CHECK(relative_error({2, 0}, {1, 0}) == 0.5);

    VerificationReport rep;
    rep.identity = "demo";
    rep.params = "x=1";
    rep.set_sides({1.5, 0.0}, {1.5, 1e-12});
    CHECK(rep.abs_err == 1e-12);
    auto row = to_csv_row(rep);
    CHECK(row.find("demo,x=1,1.5,0,") == 0);
}
