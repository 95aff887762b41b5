#pragma once

#include "pencil_forge/poly.hpp"

namespace pencil_forge {

/// Quotient of polynomials in lowest terms.
///
/// The denominator is monic in the kernel's monomial order and coprime to
/// the numerator; zero is 0/1. Two equal rational functions therefore have
/// identical representations.
class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(const mpq_class& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    RationalFunction(long c) : num_(c), den_(1) {}              // NOLINT(google-explicit-constructor)
    RationalFunction(Poly p) : num_(std::move(p)), den_(1) {}   // NOLINT(google-explicit-constructor)
    RationalFunction(Poly num, Poly den);

    const Poly& numerator() const noexcept { return num_; }
    const Poly& denominator() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const noexcept { return den_.is_constant(); }
    mpq_class constant_value() const;
    bool contains(Var v) const noexcept { return num_.contains(v) || den_.contains(v); }
    std::vector<Var> variables() const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
    RationalFunction& operator/=(const RationalFunction& b) { return *this = *this / b; }
    RationalFunction pow(int exponent) const;
    RationalFunction inverse() const;

    /// Formal partial derivative treating every variable as independent.
    RationalFunction derivative(Var v) const;

    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

private:
    struct Reduced {};
    RationalFunction(Poly num, Poly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
    static RationalFunction reduced(Poly num, Poly den);

    Poly num_;
    Poly den_;
};

}  // namespace pencil_forge
