#pragma once

/**
 * @file transforms.hpp
 * @brief The summation identities and oscillatory-integral estimates:
 *        Poisson summation, the holomorphic Voronoi identity with its
 *        Bessel transform, the exact delta-symbol expansion, and
 *        stationary/non-stationary phase checks.
 */

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "chitwist/bessel.hpp"
#include "chitwist/characters.hpp"
#include "chitwist/errors.hpp"
#include "chitwist/forms.hpp"
#include "chitwist/modarith.hpp"
#include "chitwist/parallel.hpp"
#include "chitwist/quadrature.hpp"
#include "chitwist/report.hpp"
#include "chitwist/windows.hpp"

namespace chitwist {

// ---------------------------------------------------------------------------
// Delta-symbol expansion
// ---------------------------------------------------------------------------

/// Parameters of the delta expansion: the integer probed and the
/// modulus ceiling Q >= 1.
struct DeltaConfig {
    i64 n = 0;
    double Q = 1.0;
};

/**
 * Evaluates the double-sum expansion
 *   2 Re sum_{1<=q<=Q} sum*_{Q<a<=q+Q} (1/aq) e(n abar/q) I(n,a,q),
 * with the x-integral I in closed form: 1 for n = 0, otherwise
 * (e(-n/aq) - 1) / (-2 pi i n/(aq)). The result equals [n = 0] exactly,
 * up to floating rounding; that exactness is what the verification
 * suites pin down.
 */
inline double delta_expand(i64 n, double Q) {
    if (Q < 1.0) throw PreconditionViolated("delta_expand: need Q >= 1");
    const double two_pi = 2.0 * std::numbers::pi;
    cdouble total{0.0, 0.0};
    i64 qmax = static_cast<i64>(std::floor(Q));
    for (i64 q = 1; q <= qmax; ++q) {
        i64 a_lo = static_cast<i64>(std::floor(Q)) + 1;
        i64 a_hi = static_cast<i64>(std::floor(static_cast<double>(q) + Q));
        for (i64 a = a_lo; a <= a_hi; ++a) {
            if (std::gcd(a, q) != 1) continue;
            i64 abar = (q == 1) ? 0 : mod_inverse(a % q, q).value;
            cdouble additive = unit_phase_frac(mod_mul(mod_reduce(n, q), abar, q), q);
            cdouble xint;
            if (n == 0) {
                xint = cdouble(1.0, 0.0);
            } else {
                double c = -static_cast<double>(n) / (static_cast<double>(a) * q);
                // e(c) - 1 without cancellation: cos-1 = -2 sin^2(pi c)
                double s = std::sin(std::numbers::pi * c);
                cdouble num(-2.0 * s * s, std::sin(two_pi * c));
                xint = num / cdouble(0.0, two_pi * c);
            }
            total += additive * xint / (static_cast<double>(a) * q);
        }
    }
    return 2.0 * total.real();
}

inline double delta_expand(const DeltaConfig& cfg) { return delta_expand(cfg.n, cfg.Q); }

// ---------------------------------------------------------------------------
// Poisson summation
// ---------------------------------------------------------------------------

/// Test function for Poisson checks: f plus an optional closed-form
/// Fourier transform. Without one (compact support required) the
/// transform is computed by oscillatory quadrature.
struct SchwartzFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<cdouble(double)> fhat; // may be empty
    double support_lo = 0.0;
    double support_hi = 0.0;
    bool compact = false;
};

inline SchwartzFunction gaussian_test_function() {
    SchwartzFunction fn;
    fn.name = "gaussian";
    fn.f = [](double x) { return std::exp(-std::numbers::pi * x * x); };
    fn.fhat = [](double y) { return cdouble(std::exp(-std::numbers::pi * y * y), 0.0); };
    return fn;
}

inline SchwartzFunction window_test_function(const SmoothWindow& w) {
    SchwartzFunction fn;
    fn.name = "window";
    fn.f = [w](double x) { return w(x); };
    fn.support_lo = w.support_lo();
    fn.support_hi = w.support_hi();
    fn.compact = true;
    return fn;
}

/**
 * Verifies sum_n F(n) = sum_m Fhat(m) for F(x) = f((x - shift)/scale),
 * truncating both sides where the terms drop below tail_cut and
 * refusing to report if the tail budget cannot be met.
 */
inline VerificationReport poisson_verify(const SchwartzFunction& fn, double shift = 0.0,
                                         double scale = 1.0, double tail_cut = 1e-18) {
    if (scale <= 0.0) throw PreconditionViolated("poisson_verify: scale must be positive");
    // A transform evaluated by quadrature bottoms out at roundoff noise
    // around 1e-16; chasing tails below that would never terminate.
    if (!fn.fhat) tail_cut = std::max(tail_cut, 1e-13);
    Stopwatch clock;

    auto F = [&](double x) { return fn.f((x - shift) / scale); };

    cdouble lhs{0.0, 0.0};
    i64 lhs_terms = 0;
    if (fn.compact) {
        i64 lo = static_cast<i64>(std::ceil(fn.support_lo * scale + shift));
        i64 hi = static_cast<i64>(std::floor(fn.support_hi * scale + shift));
        for (i64 n = lo; n <= hi; ++n, ++lhs_terms) lhs += F(static_cast<double>(n));
    } else {
        constexpr i64 cap = 10'000'000;
        i64 center = static_cast<i64>(std::llround(shift));
        lhs += F(static_cast<double>(center));
        int quiet = 0;
        for (i64 d = 1; quiet < 40; ++d) {
            if (d > cap) throw NonConvergent("poisson_verify: direct sum did not decay");
            double t = F(static_cast<double>(center + d)) + F(static_cast<double>(center - d));
            lhs += t;
            lhs_terms += 2;
            quiet = (std::abs(t) < tail_cut) ? quiet + 1 : 0;
        }
    }

    // Dual side: Fhat(y) = scale * e(-shift y) * fhat(scale y).
    auto fhat_base = [&](double y) -> cdouble {
        if (fn.fhat) return fn.fhat(y);
        if (!fn.compact)
            throw PreconditionViolated("poisson_verify: need closed-form transform or compact support");
        auto res = oscillatory_quadrature([&](double x) { return fn.f(x); },
                                          [&](double x) { return -x * y; }, fn.support_lo,
                                          fn.support_hi, {});
        return res.value;
    };
    auto Fhat = [&](double m) { return scale * unit_phase(-shift * m) * fhat_base(scale * m); };

    cdouble rhs = Fhat(0.0);
    i64 rhs_terms = 1;
    {
        const i64 cap = fn.fhat ? 1'000'000 : 50'000;
        int quiet = 0;
        for (i64 m = 1; quiet < 8; ++m) {
            if (m > cap) throw NonConvergent("poisson_verify: dual sum did not decay");
            cdouble t = Fhat(static_cast<double>(m)) + Fhat(static_cast<double>(-m));
            rhs += t;
            rhs_terms += 2;
            quiet = (std::abs(t) < tail_cut) ? quiet + 1 : 0;
        }
    }

    VerificationReport rep;
    rep.identity = "poisson";
    std::ostringstream p;
    p << fn.name << ";shift=" << shift << ";scale=" << scale;
    rep.params = p.str();
    rep.set_sides(lhs, rhs);
    std::ostringstream t;
    t << "lhs_terms=" << lhs_terms << ";rhs_terms=" << rhs_terms << ";tail_cut=" << tail_cut;
    rep.truncation = t.str();
    rep.time_ms = clock.elapsed_ms();
    return rep;
}

// ---------------------------------------------------------------------------
// Bessel transform and the Voronoi identity
// ---------------------------------------------------------------------------

/**
 * H(y) = int_0^inf h(x) J_{k-1}(4 pi sqrt(x y)) dx for h supported on
 * [lo, hi] in (0, inf). The substitution x = t^2 makes the kernel phase
 * linear in t, so fixed panel density per period is enough.
 */
template <typename H>
double bessel_transform_H(H&& h, double lo, double hi, double y, int weight,
                          double err_tol_scale = 1e-8) {
    if (!(lo > 0.0 && hi > lo)) throw PreconditionViolated("bessel_transform_H: bad support");
    if (!(y >= 0.0)) throw PreconditionViolated("bessel_transform_H: y must be >= 0");
    int order = weight - 1;
    double tlo = std::sqrt(lo), thi = std::sqrt(hi);
    double c = 4.0 * std::numbers::pi * std::sqrt(y);
    double periods = c * (thi - tlo) / (2.0 * std::numbers::pi);
    long panels = static_cast<long>(std::ceil(periods / 0.75)) + 6;
    auto integrand = [&](double t) { return h(t * t) * bessel_j(order, c * t) * 2.0 * t; };
    double fine = detail::gl16_panels(integrand, tlo, thi, panels);
    double coarse = detail::gl16_panels(integrand, tlo, thi, (panels + 1) / 2);
    double hmax = 0.0;
    for (int i = 0; i <= 64; ++i) hmax = std::max(hmax, std::abs(h(lo + (hi - lo) * i / 64.0)));
    if (std::abs(fine - coarse) > err_tol_scale * std::max((hi - lo) * hmax, 1e-300))
        throw QuadratureFailure("bessel_transform_H: resolution check failed");
    return fine;
}

/// Dual-sum length that provably clears the doubling certificate for
/// bump-window data (see voronoi_verify below for the measured law).
inline i64 default_voronoi_truncation(i64 q, double X) {
    return std::max<i64>(30, static_cast<i64>(std::ceil((100.0 + 78400.0) * q * q / X)));
}

/// Table of H(n/q^2) for n = 1..n_max with h(x) = window(x/X).
struct HankelTable {
    int weight = 12;
    i64 q = 1;
    double X = 1.0;
    std::vector<double> values; // [n], slot 0 unused
};

inline HankelTable make_hankel_table(int weight, const SmoothWindow& win, double X, i64 q,
                                     i64 n_max) {
    HankelTable table;
    table.weight = weight;
    table.q = q;
    table.X = X;
    table.values.assign(static_cast<size_t>(n_max + 1), 0.0);
    int order = weight - 1;
    double ulo = win.support_lo(), uhi = win.support_hi();
    double tlo = std::sqrt(ulo), thi = std::sqrt(uhi);
    parallel_for(1, n_max + 1, [&](i64 n) {
        // H(n/q^2) = X int win(u) J(4 pi sqrt(X u n)/q) du,  u = t^2
        double c = 4.0 * std::numbers::pi * std::sqrt(X * static_cast<double>(n)) / static_cast<double>(q);
        double periods = c * (thi - tlo) / (2.0 * std::numbers::pi);
        long panels = static_cast<long>(std::ceil(periods / 0.75)) + 6;
        auto integrand = [&](double t) { return win(t * t) * bessel_j(order, c * t) * 2.0 * t * X; };
        table.values[static_cast<size_t>(n)] = detail::gl16_panels(integrand, tlo, thi, panels);
    });
    return table;
}

/**
 * Checks the holomorphic Voronoi identity for h(x) = window(x/X):
 *
 *   sum_n lambda(n) e_q(a n) h(n)
 *     = (2 pi i^k / q) sum_n lambda(n) e_q(-abar n) H(n/q^2).
 *
 * The left side is an exact finite sum over the window support. The
 * right side is truncated at T and the tail is certified by recomputing
 * at 2T: if doubling moves the value by more than 1e-8 |LHS|, the
 * truncation was not sufficient and the check refuses to report.
 *
 * Default T: measured on the bump window, |H(n/q^2)| falls off like
 * exp(-0.065 sqrt(X n)/q), so the cut sits where that argument reaches
 * 280 (tails ~1e-13 of scale), i.e. T = 78500 q^2/X plus the q^2/X
 * conductor term. A flat y-cutoff independent of X would either waste
 * effort or fail the doubling certificate.
 */
inline VerificationReport voronoi_verify(const CuspForm& form, i64 a, i64 q,
                                         const SmoothWindow& win, double X, i64 T = 0,
                                         const HankelTable* shared_table = nullptr) {
    if (q < 1) throw PreconditionViolated("voronoi_verify: q must be >= 1");
    if (std::gcd(mod_reduce(a, std::max<i64>(q, 1)), q) != 1 && q > 1)
        throw PreconditionViolated("voronoi_verify: need gcd(a, q) = 1");
    Stopwatch clock;
    if (T == 0) T = default_voronoi_truncation(q, X);
    i64 T2 = 2 * T;

    double lhs_lo = win.support_lo() * X, lhs_hi = win.support_hi() * X;
    if (form.cache_size() < std::max<i64>(static_cast<i64>(lhs_hi) + 1, T2))
        throw SizeLimit("voronoi_verify: coefficient cache too small");

    cdouble lhs{0.0, 0.0};
    for (i64 n = static_cast<i64>(std::ceil(lhs_lo)); n <= static_cast<i64>(std::floor(lhs_hi)); ++n)
        lhs += form.lambda(n) * unit_phase_frac(mod_reduce(a, q) * (n % q), q) * win(n / X);

    const HankelTable* table = shared_table;
    HankelTable local;
    if (table == nullptr || static_cast<i64>(table->values.size()) <= T2 || table->q != q ||
        table->X != X || table->weight != form.weight()) {
        local = make_hankel_table(form.weight(), win, X, q, T2);
        table = &local;
    }

    i64 abar = (q == 1) ? 0 : mod_inverse(mod_reduce(a, q), q).value;
    int k = form.weight();
    cdouble i_pow_k = std::pow(cdouble(0.0, 1.0), k % 4);
    cdouble prefactor = 2.0 * std::numbers::pi * i_pow_k / static_cast<double>(q);

    cdouble rhs_T{0.0, 0.0}, rhs_tail{0.0, 0.0};
    for (i64 n = 1; n <= T2; ++n) {
        cdouble term = form.lambda(n) * unit_phase_frac(mod_reduce(-abar, q) * (n % q), q) *
                       table->values[static_cast<size_t>(n)];
        if (n <= T)
            rhs_T += term;
        else
            rhs_tail += term;
    }
    rhs_T *= prefactor;
    rhs_tail *= prefactor;

    if (std::abs(rhs_tail) > 1e-8 * std::abs(lhs))
        throw TruncationInsufficient("voronoi_verify: doubling T moved the dual sum too much");

    VerificationReport rep;
    rep.identity = "voronoi-hol";
    std::ostringstream p;
    p << "k=" << k << ";q=" << q << ";a=" << a << ";X=" << X;
    rep.params = p.str();
    rep.set_sides(lhs, rhs_T);
    std::ostringstream t;
    t << "T=" << T << ";tail_move=" << format_g17(std::abs(rhs_tail));
    rep.truncation = t.str();
    rep.time_ms = clock.elapsed_ms();
    return rep;
}

// ---------------------------------------------------------------------------
// Non-stationary and stationary phase
// ---------------------------------------------------------------------------

/**
 * Decay check for int g e(f_B) under min |f_B'| >= B: evaluates the
 * integral along a doubling ladder of B values and verifies both the
 * fixed-constant bound C_j B^{-j} (C_j calibrated on the first rung)
 * and the rung-to-rung decay rate 2^{-j}.
 */
template <typename Amplitude, typename PhaseFamily>
VerificationReport nonstationary_bound_check(Amplitude&& g, PhaseFamily&& phase_for, double a,
                                             double b, const std::vector<double>& B_values, int j) {
    if (B_values.empty()) throw PreconditionViolated("nonstationary_bound_check: empty B ladder");
    Stopwatch clock;
    std::vector<double> mags;
    mags.reserve(B_values.size());
    for (double B : B_values) {
        auto phase = phase_for(B);
        mags.push_back(std::abs(oscillatory_quadrature(g, phase, a, b).value));
    }
    double C = 2.0 * mags.front() * std::pow(B_values.front(), j);
    bool ok = true;
    for (size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] > C * std::pow(B_values[i], -j) + 1e-30) ok = false;
        if (i + 1 < mags.size()) {
            double rate = std::pow(B_values[i] / B_values[i + 1], j);
            if (mags[i + 1] > mags[i] * rate * 1.10 + 1e-30) ok = false;
        }
    }
    VerificationReport rep;
    rep.identity = "nonstationary-decay";
    std::ostringstream p;
    p << "j=" << j << ";B0=" << B_values.front() << ";rungs=" << B_values.size();
    rep.params = p.str();
    rep.set_sides(cdouble(mags.back(), 0.0), cdouble(C * std::pow(B_values.back(), -j), 0.0));
    rep.passed = ok;
    std::ostringstream t;
    t << "magnitudes=";
    for (double m : mags) t << format_g17(m) << "|";
    rep.truncation = t.str();
    rep.time_ms = clock.elapsed_ms();
    return rep;
}

/// Phase handed to the stationary-phase evaluator: value and two
/// derivatives, all in period units (the integrand is e(f) = e^{2 pi i f}).
struct PhaseSpec {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

/// Caller-supplied scale constants of the phase/amplitude pair.
struct HuxleyBounds {
    double theta_f = 1.0;
    double omega_f = 1.0;
    double omega_g = 1.0;
};

struct StationaryPhaseResult {
    cdouble main_term{0.0, 0.0};
    double error_budget = 0.0;
    double x0 = 0.0;
};

/**
 * Leading stationary-phase term g(x0) e(f(x0) + 1/8) / sqrt(f''(x0))
 * for a unique interior stationary point where f' crosses from
 * negative to positive, plus the error budget
 * omega_f^4/(theta_f^2 kappa^3) + omega_f/theta_f^{3/2}
 * + omega_f^3/(theta_f^{3/2} omega_g^2).
 */
inline StationaryPhaseResult stationary_phase_main_term(const std::function<double(double)>& g,
                                                        const PhaseSpec& phase, double a, double b,
                                                        const HuxleyBounds& bounds) {
    const int grid = 4096;
    int up_crossings = 0, down_crossings = 0;
    double bracket_lo = a, bracket_hi = b;
    double prev = phase.df(a);
    for (int i = 1; i <= grid; ++i) {
        double x = a + (b - a) * i / grid;
        double cur = phase.df(x);
        if (prev < 0.0 && cur >= 0.0) {
            ++up_crossings;
            bracket_lo = a + (b - a) * (i - 1) / grid;
            bracket_hi = x;
        } else if (prev > 0.0 && cur <= 0.0) {
            ++down_crossings;
        }
        prev = cur;
    }
    if (up_crossings + down_crossings == 0)
        throw NoStationaryPoint("stationary_phase_main_term: f' does not vanish");
    if (up_crossings + down_crossings > 1)
        throw MultipleStationaryPoints("stationary_phase_main_term: several sign changes of f'");
    if (up_crossings == 0)
        throw PreconditionViolated("stationary_phase_main_term: f' changes + to - (f'' < 0)");

    double lo = bracket_lo, hi = bracket_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (b - a); ++it) {
        double mid = 0.5 * (lo + hi);
        (phase.df(mid) < 0.0 ? lo : hi) = mid;
    }
    double x0 = 0.5 * (lo + hi);
    double f2 = phase.d2f(x0);
    if (!(f2 > 0.0))
        throw PreconditionViolated("stationary_phase_main_term: f''(x0) must be positive");

    double kappa = std::min(x0 - a, b - x0);
    double th = bounds.theta_f, om = bounds.omega_f, og = bounds.omega_g;
    StationaryPhaseResult res;
    res.x0 = x0;
    res.main_term = g(x0) * unit_phase(phase.f(x0) + 0.125) / std::sqrt(f2);
    res.error_budget = std::pow(om, 4) / (th * th * kappa * kappa * kappa) +
                       om / std::pow(th, 1.5) + std::pow(om, 3) / (std::pow(th, 1.5) * og * og);
    return res;
}

// ---------------------------------------------------------------------------
// The Bessel-weighted dual-sum integral bound
// ---------------------------------------------------------------------------

/**
 * Evaluates the dual-side oscillatory integral
 *   J = int V(y) e(-N x y/(p^l a q)) J_{k-1}(4 pi sqrt(n N y)/(p^l q)) dy
 * at the representative point x = q/(2Q), a = smallest integer above
 * Q = sqrt(N/p^l) coprime to q, and checks |J| <= C p^l q / sqrt(n N)
 * with C = 20 fixed across sweeps.
 */
inline VerificationReport voronoi_J_bound_check(i64 n, double N, i64 q, i64 ell, i64 p,
                                                int weight = 12) {
    if (n < 1 || q < 1 || ell < 0 || p < 2) throw PreconditionViolated("voronoi_J_bound_check: bad parameters");
    Stopwatch clock;
    SmoothWindow V(WindowKind::bump_on_1_2);
    double pl = std::pow(static_cast<double>(p), static_cast<double>(ell));
    if (N < pl) throw PreconditionViolated("voronoi_J_bound_check: need N >= p^l so Q >= 1");
    double Q = std::sqrt(N / pl);
    i64 a = static_cast<i64>(std::floor(Q)) + 1;
    while (std::gcd(a, q) != 1) ++a;
    double x = static_cast<double>(q) / (2.0 * Q);

    int order = weight - 1;
    double lin = N * x / (pl * static_cast<double>(a) * q); // periods per unit y
    double c = 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(n) * N) / (pl * static_cast<double>(q));

    double periods = lin * 1.0 + c * (std::sqrt(2.0) - 1.0) / (2.0 * std::numbers::pi);
    long panels = static_cast<long>(std::ceil(periods / 0.6)) + 8;
    auto integrand = [&](double y) -> cdouble {
        return V(y) * bessel_j(order, c * std::sqrt(y)) * unit_phase(-lin * y);
    };
    cdouble fine = detail::gl16_panels(integrand, 1.0, 2.0, panels);
    cdouble coarse = detail::gl16_panels(integrand, 1.0, 2.0, (panels + 1) / 2);
    if (std::abs(fine - coarse) > 1e-9)
        throw QuadratureFailure("voronoi_J_bound_check: resolution check failed");

    double bound = 20.0 * pl * static_cast<double>(q) / std::sqrt(static_cast<double>(n) * N);
    VerificationReport rep;
    rep.identity = "voronoi-J-bound";
    std::ostringstream ps;
    ps << "n=" << n << ";N=" << N << ";q=" << q << ";l=" << ell << ";p=" << p << ";k=" << weight;
    rep.params = ps.str();
    rep.set_sides(cdouble(std::abs(fine), 0.0), cdouble(bound, 0.0));
    rep.passed = std::abs(fine) <= bound;
    std::ostringstream t;
    t << "x=" << x << ";a=" << a << ";panels=" << panels;
    rep.truncation = t.str();
    rep.time_ms = clock.elapsed_ms();
    return rep;
}

} // namespace chitwist
