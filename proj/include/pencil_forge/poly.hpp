#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace pencil_forge {

/// Index of an interned symbol (see symbols.hpp).
using Var = std::uint32_t;

/// Power product of variables, kept as (variable, exponent) pairs sorted by variable.
class Monomial {
public:
    using Factor = std::pair<Var, std::uint32_t>;

    Monomial() = default;
    static Monomial variable(Var v, std::uint32_t exponent = 1);

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    bool is_one() const noexcept { return factors_.empty(); }
    std::uint32_t degree(Var v) const noexcept;
    std::uint32_t total_degree() const noexcept;

    Monomial operator*(const Monomial& other) const;
    bool divides(const Monomial& other) const noexcept;
    /// Precondition: divisor.divides(*this).
    Monomial quotient(const Monomial& divisor) const;
    Monomial without(Var v) const;
    static Monomial gcd(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& other) const noexcept { return factors_ == other.factors_; }
    bool operator!=(const Monomial& other) const noexcept { return !(*this == other); }

    /// Lexicographic order with lower variable indices more significant. Returns <0, 0, >0.
    friend int compare(const Monomial& a, const Monomial& b) noexcept;

private:
    explicit Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {}
    std::vector<Factor> factors_;
};

struct Term {
    Monomial monomial;
    mpq_class coefficient;
};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are stored in strictly decreasing monomial order with nonzero
/// coefficients, so structural equality is polynomial equality.
class Poly {
public:
    Poly() = default;
    Poly(const mpq_class& constant);  // NOLINT(google-explicit-constructor)
    Poly(long constant) : Poly(mpq_class(constant)) {}  // NOLINT(google-explicit-constructor)
    static Poly variable(Var v, std::uint32_t exponent = 1);
    static Poly term(const Monomial& m, const mpq_class& c);
    /// Builds a polynomial from terms in any order, merging duplicates.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    bool is_monomial() const noexcept { return terms_.size() == 1; }
    /// Value of a constant polynomial (zero for the zero polynomial).
    mpq_class constant_value() const;
    const Term& leading() const { return terms_.front(); }

    std::vector<Var> variables() const;
    bool contains(Var v) const noexcept;
    std::uint32_t degree(Var v) const noexcept;
    std::uint32_t total_degree() const noexcept;

    /// Coefficients with respect to `x`, keyed by power of `x`.
    std::map<std::uint32_t, Poly> coefficients(Var x) const;
    Poly leading_coefficient(Var x) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& other);
    Poly& operator-=(const Poly& other);
    Poly& operator*=(const Poly& other);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(const mpq_class& c) const;
    Poly times_monomial(const Monomial& m) const;
    Poly pow(std::uint32_t exponent) const;

    Poly derivative(Var v) const;

    /// Largest monomial dividing every term.
    Monomial monomial_content() const;
    /// Positive rational c such that this/c has coprime integer coefficients.
    mpq_class numeric_content() const;
    /// Integer-coprime multiple with positive leading coefficient.
    Poly primitive() const;
    /// Scaled so the leading coefficient is 1.
    Poly monic() const;

    Poly divide_monomial(const Monomial& m) const;
    /// Exact quotient, or nullopt when `divisor` does not divide this polynomial.
    std::optional<Poly> divide_exact(const Poly& divisor) const;

    bool operator==(const Poly& other) const;
    bool operator!=(const Poly& other) const { return !(*this == other); }

private:
    std::vector<Term> terms_;
};

/// Sparse pseudo-remainder of `a` by `b` with respect to `x`.
Poly pseudo_remainder(const Poly& a, const Poly& b, Var x);

/// Greatest common divisor, normalized as Poly::primitive(). gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

/// Content of `p` viewed as a polynomial in `x` (gcd of its coefficients).
Poly content(const Poly& p, Var x);

/// r with r^2 = p and positive leading coefficient, if p is a perfect square over Q.
std::optional<Poly> square_root(const Poly& p);

}  // namespace pencil_forge
