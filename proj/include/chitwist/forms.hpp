#pragma once

/**
 * @file forms.hpp
 * @brief Hecke eigenforms of level 1: exact coefficients and
 *        normalized eigenvalues.
 *
 * The default form is the weight-12 discriminant form, whose q-expansion
 * q * prod (1-q^m)^24 is generated exactly: the cube of the Euler product
 * is the sparse series sum (-1)^j (2j+1) q^{j(j+1)/2}, and eight sparse
 * multiplications produce the full expansion in O(N sqrt N) exact
 * 128-bit operations. The one-dimensional spaces of weight 16/18/20/22/26
 * come from multiplying by the corresponding Eisenstein series. Any
 * 128-bit overflow aborts with SizeLimit instead of silently wrapping.
 */

#include <cmath>
#include <vector>

#include "chitwist/errors.hpp"
#include "chitwist/modarith.hpp"

namespace chitwist {

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw SizeLimit("forms: 128-bit overflow in addition");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw SizeLimit("forms: 128-bit overflow in product");
    return r;
}

namespace detail {

/// Coefficients of (sum_j (-1)^j (2j+1) q^{j(j+1)/2})^8 up to degree deg.
inline std::vector<i128> eta_cubed_eighth_power(i64 deg) {
    std::vector<std::pair<i64, i64>> sparse; // (exponent, coefficient)
    for (i64 j = 0;; ++j) {
        i64 e = j * (j + 1) / 2;
        if (e > deg) break;
        sparse.emplace_back(e, (j % 2 == 0 ? (2 * j + 1) : -(2 * j + 1)));
    }
    std::vector<i128> acc(static_cast<size_t>(deg + 1), 0);
    acc[0] = 1;
    for (int pass = 0; pass < 8; ++pass) {
        std::vector<i128> next(static_cast<size_t>(deg + 1), 0);
        for (auto [e, c] : sparse) {
            for (i64 n = e; n <= deg; ++n) {
                if (acc[static_cast<size_t>(n - e)] == 0) continue;
                next[static_cast<size_t>(n)] = checked_add(
                    next[static_cast<size_t>(n)], checked_mul(acc[static_cast<size_t>(n - e)], c));
            }
        }
        acc.swap(next);
    }
    return acc;
}

/// sigma_j(n) for n <= N, exact.
inline std::vector<i128> sigma_table(i64 power, i64 N) {
    std::vector<i128> s(static_cast<size_t>(N + 1), 0);
    for (i64 d = 1; d <= N; ++d) {
        i128 dp = 1;
        for (i64 t = 0; t < power; ++t) dp = checked_mul(dp, d);
        for (i64 n = d; n <= N; n += d) s[static_cast<size_t>(n)] = checked_add(s[static_cast<size_t>(n)], dp);
    }
    return s;
}

/// Eisenstein series E_w coefficients [q^0..q^deg] for w in {4,6,8,10,14}.
inline std::vector<i128> eisenstein(i64 w, i64 deg) {
    i64 c;
    switch (w) {
        case 4: c = 240; break;
        case 6: c = -504; break;
        case 8: c = 480; break;
        case 10: c = -264; break;
        case 14: c = -24; break;
        default: throw PreconditionViolated("eisenstein: weight not in {4,6,8,10,14}");
    }
    auto sig = sigma_table(w - 1, deg);
    std::vector<i128> e(static_cast<size_t>(deg + 1), 0);
    e[0] = 1;
    for (i64 n = 1; n <= deg; ++n) e[static_cast<size_t>(n)] = checked_mul(sig[static_cast<size_t>(n)], c);
    return e;
}

} // namespace detail

inline constexpr i64 kMaxCoefficientCount = 1'000'000;

/**
 * Exact integer coefficients of the weight-12 form, tau(1..N).
 * Slot [n] holds tau(n); slot [0] is unused.
 */
inline std::vector<i128> delta_coefficients(i64 N) {
    if (N < 1 || N > kMaxCoefficientCount) throw SizeLimit("delta_coefficients: N outside [1, 10^6]");
    auto f = detail::eta_cubed_eighth_power(N - 1);
    std::vector<i128> tau(static_cast<size_t>(N + 1), 0);
    for (i64 n = 1; n <= N; ++n) tau[static_cast<size_t>(n)] = f[static_cast<size_t>(n - 1)];
    return tau;
}

/**
 * A level-1 Hecke eigenform with a fixed-size coefficient cache.
 * Weights 12, 16, 18, 20, 22, 26 (the one-dimensional spaces). The
 * cache is built at construction and immutable afterwards; concurrent
 * reads are safe.
 */
class CuspForm {
  public:
    explicit CuspForm(int weight = 12, i64 cache_size = 20000) : weight_(weight) {
        if (cache_size < 1 || cache_size > kMaxCoefficientCount)
            throw SizeLimit("CuspForm: cache size outside [1, 10^6]");
        auto tau = delta_coefficients(cache_size);
        if (weight == 12) {
            raw_ = std::move(tau);
        } else {
            auto eis = detail::eisenstein(weight - 12, cache_size - 1);
            raw_.assign(static_cast<size_t>(cache_size + 1), 0);
            for (i64 n = 1; n <= cache_size; ++n) {
                i128 acc = 0;
                for (i64 m = 1; m <= n; ++m) {
                    if (tau[static_cast<size_t>(m)] == 0) continue;
                    acc = checked_add(acc, checked_mul(tau[static_cast<size_t>(m)], eis[static_cast<size_t>(n - m)]));
                }
                raw_[static_cast<size_t>(n)] = acc;
            }
        }
        lambda_.assign(raw_.size(), 0.0);
        double half_km1 = (weight_ - 1) / 2.0;
        for (size_t n = 1; n < raw_.size(); ++n)
            lambda_[n] = static_cast<double>(raw_[n]) * std::pow(static_cast<double>(n), -half_km1);
    }

    int weight() const { return weight_; }
    i64 cache_size() const { return static_cast<i64>(raw_.size()) - 1; }

    /// Exact a_f(n).
    i128 raw(i64 n) const {
        check(n);
        return raw_[static_cast<size_t>(n)];
    }

    /// Normalized lambda_f(n) = a_f(n) / n^{(k-1)/2}.
    double lambda(i64 n) const {
        check(n);
        return lambda_[static_cast<size_t>(n)];
    }

    const std::vector<double>& lambdas() const { return lambda_; }

  private:
    void check(i64 n) const {
        if (n < 1 || n >= static_cast<i64>(raw_.size()))
            throw SizeLimit("CuspForm: index outside coefficient cache");
    }

    int weight_;
    std::vector<i128> raw_;
    std::vector<double> lambda_;
};

inline std::vector<double> normalized_coefficients(const CuspForm& form, i64 N) {
    if (N > form.cache_size()) throw SizeLimit("normalized_coefficients: beyond cache");
    std::vector<double> out(static_cast<size_t>(N + 1), 0.0);
    for (i64 n = 1; n <= N; ++n) out[static_cast<size_t>(n)] = form.lambda(n);
    return out;
}

/// sum_{n <= x} |lambda_f(n)|^2
inline double rankin_selberg_sum(const CuspForm& form, double x) {
    if (x < 1.0) return 0.0;
    i64 top = static_cast<i64>(x);
    if (top > form.cache_size()) throw SizeLimit("rankin_selberg_sum: beyond cache");
    double s = 0.0;
    for (i64 n = 1; n <= top; ++n) {
        double l = form.lambda(n);
        s += l * l;
    }
    return s;
}

/// d(n) for n <= N by sieve; slot [0] unused.
inline std::vector<i64> divisor_counts(i64 N) {
    std::vector<i64> d(static_cast<size_t>(N + 1), 0);
    for (i64 a = 1; a <= N; ++a)
        for (i64 n = a; n <= N; n += a) ++d[static_cast<size_t>(n)];
    return d;
}

} // namespace chitwist
