#pragma once

/**
 * @file characters.hpp
 * @brief Dirichlet characters mod p^r and mod P1*P2, with Gauss sums.
 *
 * A character is pinned down by an index k against the smallest
 * primitive root g of each prime-power factor: chi(g^t) = e(k*t/phi).
 * Construction builds a discrete-log table and a full value table, so
 * evaluation is a single lookup. Characters are immutable once built
 * and safe to share across threads.
 */

#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "chitwist/errors.hpp"
#include "chitwist/modarith.hpp"

namespace chitwist {

using cdouble = std::complex<double>;

/// e(x) = exp(2 pi i x)
inline cdouble unit_phase(double x) {
    return std::polar(1.0, 2.0 * std::numbers::pi * x);
}

/// e(num/den) with the fraction reduced into [0, 1) first, so the
/// argument handed to sin/cos never grows with the summation range.
inline cdouble unit_phase_frac(i64 num, i64 den) {
    num = mod_reduce(num, den);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den));
}

namespace detail {

/// One prime-power factor chi(g^t) = e(index*t/phi) of a character.
struct CharacterComponent {
    i64 p = 0;
    i64 r = 0;
    i64 modulus = 1;
    i64 phi = 1;
    i64 generator = 1;
    i64 index = 0;
    bool primitive = false;
    std::vector<i64> dlog;        // dlog[x] for units, -1 on non-units
    std::vector<cdouble> values;  // chi(x) for all x mod modulus

    static CharacterComponent build(i64 p, i64 r, i64 index) {
        if (p == 2) throw UnsupportedModulus("character: p = 2 not supported");
        if (!is_prime(p) || r < 1)
            throw PreconditionViolated("character: need odd prime p and r >= 1");
        CharacterComponent c;
        c.p = p;
        c.r = r;
        c.modulus = ipow(p, r);
        c.phi = phi_prime_power(p, r);
        if (index < 0 || index >= c.phi)
            throw IndexOutOfRange("character: index outside [0, phi)");
        c.index = index;
        c.generator = primitive_root(p, r);
        // chi is induced from modulus p^(r-1) exactly when p | index
        // (for r = 1: when index = 0). Tests check this against the
        // definitional criterion.
        c.primitive = (r == 1) ? (index != 0) : (index % p != 0);
        c.dlog.assign(static_cast<size_t>(c.modulus), -1);
        i64 x = 1;
        for (i64 t = 0; t < c.phi; ++t) {
            c.dlog[static_cast<size_t>(x)] = t;
            x = mod_mul(x, c.generator, c.modulus);
        }
        c.values.assign(static_cast<size_t>(c.modulus), cdouble(0.0, 0.0));
        for (i64 v = 0; v < c.modulus; ++v) {
            i64 t = c.dlog[static_cast<size_t>(v)];
            if (t >= 0) c.values[static_cast<size_t>(v)] = unit_phase_frac(index * t, c.phi);
        }
        return c;
    }

    cdouble eval(i64 n) const { return values[static_cast<size_t>(mod_reduce(n, modulus))]; }
};

} // namespace detail

class DirichletCharacter;
struct GaussSum {
    cdouble value;
    const DirichletCharacter* character;
};

/**
 * Character of modulus p^r (one component) or P1*P2 with P1, P2
 * distinct odd primes (two components, evaluated via CRT as a plain
 * product).
 */
class DirichletCharacter {
  public:
    i64 modulus() const { return modulus_; }
    i64 order() const { return order_; }
    bool primitive() const { return primitive_; }
    bool trivial() const { return order_ == 1; }

    const std::vector<detail::CharacterComponent>& components() const { return components_; }

    cdouble operator()(i64 n) const {
        cdouble v = components_[0].eval(n);
        if (components_.size() == 2) v *= components_[1].eval(n);
        return v;
    }

    cdouble parity() const { return (*this)(-1); }

    /// tau_chi = sum_{b mod P} chi(b) e(b/P), computed once by direct
    /// summation at construction.
    GaussSum gauss_sum() const { return {gauss_, this}; }

    DirichletCharacter conjugate() const;

    friend DirichletCharacter make_character(i64 p, i64 r, i64 index);
    friend DirichletCharacter compose(const DirichletCharacter& chi1, const DirichletCharacter& chi2);

  private:
    std::vector<detail::CharacterComponent> components_;
    i64 modulus_ = 1;
    i64 order_ = 1;
    bool primitive_ = false;
    cdouble gauss_{0.0, 0.0};

    void finalize() {
        modulus_ = 1;
        order_ = 1;
        primitive_ = true;
        for (const auto& c : components_) {
            modulus_ *= c.modulus;
            i64 comp_order = c.phi / std::gcd(c.index, c.phi);
            order_ = std::lcm(order_, comp_order);
            primitive_ = primitive_ && c.primitive;
        }
        gauss_ = cdouble(0.0, 0.0);
        for (i64 b = 0; b < modulus_; ++b) {
            cdouble chib = (*this)(b);
            if (chib != cdouble(0.0, 0.0)) gauss_ += chib * unit_phase_frac(b, modulus_);
        }
    }
};

/// chi mod p^r with chi(g^t) = e(index*t/phi(p^r)).
inline DirichletCharacter make_character(i64 p, i64 r, i64 index) {
    DirichletCharacter chi;
    chi.components_.push_back(detail::CharacterComponent::build(p, r, index));
    chi.finalize();
    return chi;
}

/// chi = chi1 * chi2 for primitive chi1 mod P1, chi2 mod P2, P1 != P2 prime.
inline DirichletCharacter compose(const DirichletCharacter& chi1, const DirichletCharacter& chi2) {
    if (chi1.components_.size() != 1 || chi2.components_.size() != 1 ||
        chi1.components_[0].r != 1 || chi2.components_[0].r != 1)
        throw PreconditionViolated("compose: factors must be characters of prime modulus");
    if (chi1.modulus() == chi2.modulus())
        throw ModuliNotCoprime("compose: moduli must be distinct primes");
    if (!chi1.primitive() || !chi2.primitive())
        throw PrimitivityRequired("compose: both factors must be primitive");
    DirichletCharacter chi;
    chi.components_.push_back(chi1.components_[0]);
    chi.components_.push_back(chi2.components_[0]);
    chi.finalize();
    return chi;
}

inline DirichletCharacter DirichletCharacter::conjugate() const {
    DirichletCharacter chi;
    for (const auto& c : components_) {
        auto cc = detail::CharacterComponent::build(c.p, c.r, c.index == 0 ? 0 : c.phi - c.index);
        chi.components_.push_back(std::move(cc));
    }
    chi.finalize();
    return chi;
}

/// chi(n), zero off units.
inline cdouble evaluate(const DirichletCharacter& chi, i64 n) { return chi(n); }

namespace detail {

inline const CharacterComponent& single_prime_power(const DirichletCharacter& chi, const char* who) {
    if (chi.components().size() != 1)
        throw PreconditionViolated(std::string(who) + ": character must have prime-power modulus");
    return chi.components().front();
}

} // namespace detail

/// Gauss sum by direct summation (already cached on the character).
inline GaussSum gauss_sum(const DirichletCharacter& chi) { return chi.gauss_sum(); }

} // namespace chitwist
