#include "pencil_forge/ratfunc.hpp"

#include <set>

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

namespace {

Poly exact(const Poly& a, const Poly& b) {
    auto q = a.divide_exact(b);
    if (!q) throw Error("internal: inexact polynomial division");
    return std::move(*q);
}

}  // namespace

RationalFunction::RationalFunction(Poly num, Poly den) {
    if (den.is_zero()) throw DivisionByZeroError("rational function with zero denominator");
    if (num.is_zero()) {
        den_ = Poly(1);
        return;
    }
    if (!den.is_constant()) {
        Poly g = gcd(num, den);
        if (!g.is_constant()) {
            num = exact(num, g);
            den = exact(den, g);
        }
    }
    *this = reduced(std::move(num), std::move(den));
}

RationalFunction RationalFunction::reduced(Poly num, Poly den) {
    if (num.is_zero()) return {};
    const mpq_class lead = den.leading().coefficient;
    if (lead != 1) {
        mpq_class inv = 1 / lead;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return {std::move(num), std::move(den), Reduced{}};
}

mpq_class RationalFunction::constant_value() const {
    return num_.constant_value() / den_.constant_value();
}

std::vector<Var> RationalFunction::variables() const {
    std::set<Var> vars;
    for (Var v : num_.variables()) vars.insert(v);
    for (Var v : den_.variables()) vars.insert(v);
    return {vars.begin(), vars.end()};
}

RationalFunction RationalFunction::operator-() const { return {-num_, den_, Reduced{}}; }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) {
        if (a.den_.is_constant()) return RationalFunction::reduced(a.num_ + b.num_, a.den_);
        return {a.num_ + b.num_, a.den_};
    }
    Poly g = gcd(a.den_, b.den_);
    if (g.is_constant()) {
        return RationalFunction::reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    Poly ad = exact(a.den_, g);
    Poly bd = exact(b.den_, g);
    Poly t = a.num_ * bd + b.num_ * ad;
    Poly den = ad * b.den_;
    if (t.is_zero()) return {};
    Poly h = gcd(t, g);
    if (!h.is_constant()) {
        t = exact(t, h);
        den = exact(den, h);
    }
    return RationalFunction::reduced(std::move(t), std::move(den));
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) {
        return {b.num_.scaled(a.constant_value()), b.den_, RationalFunction::Reduced{}};
    }
    if (b.is_constant()) {
        return {a.num_.scaled(b.constant_value()), a.den_, RationalFunction::Reduced{}};
    }
    Poly g1 = gcd(a.num_, b.den_);
    Poly g2 = gcd(b.num_, a.den_);
    Poly an = g1.is_constant() ? a.num_ : exact(a.num_, g1);
    Poly bd = g1.is_constant() ? b.den_ : exact(b.den_, g1);
    Poly bn = g2.is_constant() ? b.num_ : exact(b.num_, g2);
    Poly ad = g2.is_constant() ? a.den_ : exact(a.den_, g2);
    return RationalFunction::reduced(an * bn, ad * bd);
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw DivisionByZeroError("division by zero");
    return reduced(den_, num_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    return a * b.inverse();
}

RationalFunction RationalFunction::pow(int exponent) const {
    if (exponent < 0) return inverse().pow(-exponent);
    auto e = static_cast<std::uint32_t>(exponent);
    return reduced(num_.pow(e), den_.pow(e));
}

RationalFunction RationalFunction::derivative(Var v) const {
    Poly dn = num_.derivative(v);
    if (!den_.contains(v)) return RationalFunction(std::move(dn), den_);
    Poly dd = den_.derivative(v);
    Poly g = gcd(den_, dd);
    Poly dg = exact(den_, g);
    Poly t = dn * dg - num_ * exact(dd, g);
    if (t.is_zero()) return {};
    Poly den = den_ * dg;
    Poly h = gcd(t, den);
    if (!h.is_constant()) {
        t = exact(t, h);
        den = exact(den, h);
    }
    return reduced(std::move(t), std::move(den));
}

}  // namespace pencil_forge
