#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pencil_forge/ratfunc.hpp"
#include "pencil_forge/symbols.hpp"

namespace pencil_forge {

/// Exact symbolic scalar in normal form a + b*sqrt(s).
///
/// a and b are reduced rational functions over Q in interned symbols
/// (plain symbols, opaque function atoms and logarithm atoms); s is a
/// polynomial with integer coefficients and square-free integer content.
/// At most one radicand may occur: combining expressions with different
/// radicands throws MultipleRadicandsError. Values are immutable in
/// practice and safe to share between threads.
class Expr {
public:
    Expr() = default;
    Expr(long c) : rational_(c) {}                                // NOLINT(google-explicit-constructor)
    Expr(const mpq_class& c) : rational_(c) {}                    // NOLINT(google-explicit-constructor)
    Expr(RationalFunction r) : rational_(std::move(r)) {}         // NOLINT(google-explicit-constructor)

    static Expr symbol(Var v) { return Expr(RationalFunction(Poly::variable(v))); }
    static Expr symbol(std::string_view name);
    static Expr sqrt(const Expr& radicand);
    /// order-th derivative of the opaque function `name` evaluated at `argument`.
    static Expr function(const std::string& name, int order, const Expr& argument);
    static Expr log(const Expr& argument);

    const RationalFunction& rational_part() const noexcept { return rational_; }
    const RationalFunction& radical_coefficient() const noexcept { return radical_; }
    /// Zero polynomial when no radical is present.
    const Poly& radicand() const noexcept { return radicand_; }
    bool has_radical() const noexcept { return !radical_.is_zero(); }

    bool is_zero() const noexcept { return rational_.is_zero() && radical_.is_zero(); }
    bool is_constant() const noexcept { return !has_radical() && rational_.is_constant(); }
    mpq_class constant_value() const;
    /// Symbols occurring directly (atoms are not looked into).
    std::vector<Var> variables() const;

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr& operator+=(const Expr& b) { return *this = *this + b; }
    Expr& operator-=(const Expr& b) { return *this = *this - b; }
    Expr& operator*=(const Expr& b) { return *this = *this * b; }
    Expr& operator/=(const Expr& b) { return *this = *this / b; }
    Expr pow(int exponent) const;

    bool operator==(const Expr& o) const {
        return rational_ == o.rational_ && radical_ == o.radical_ && radicand_ == o.radicand_;
    }
    bool operator!=(const Expr& o) const { return !(*this == o); }

private:
    RationalFunction rational_;
    RationalFunction radical_;
    Poly radicand_;
};

/// Decision procedure: true iff `e` vanishes identically, treating atoms as
/// algebraically independent and the radicand as a non-square.
bool is_zero(const Expr& e);

/// Optional observer notified of every is_zero decision (used by the
/// numeric probe oracle). Pass an empty function to remove it.
void set_zero_test_observer(std::function<void(const Expr&, bool)> observer);

/// Exact partial derivative; differentiates through function and log atoms.
Expr diff(const Expr& e, Var v);
/// The symbol an expression consists of; throws if it is not a bare symbol.
Var as_symbol(const Expr& e);
inline Expr diff(const Expr& e, const Expr& symbol) { return diff(e, as_symbol(symbol)); }

/// Plain symbols `e` depends on, including those inside atom arguments.
std::set<Var> free_symbols(const Expr& e);
bool depends_on(const Expr& e, Var v);

struct FunctionBinding {
    Var parameter;
    Expr body;
};

/// Simultaneous substitution of symbols and opaque functions.
struct Substitution {
    std::map<Var, Expr> symbols;
    std::map<std::string, FunctionBinding> functions;

    bool empty() const { return symbols.empty() && functions.empty(); }
};

Expr substitute(const Expr& e, const Substitution& s);

/// Canonical text in the parser's grammar. Equal values render identically,
/// independent of interning order.
std::string render(const Expr& e);
std::string render(const Poly& p);

/// Exact evaluation at a rational point; value is rational + radical*sqrt(radicand).
struct Evaluation {
    mpq_class rational;
    mpq_class radical;
    mpq_class radicand;

    bool is_zero() const { return rational == 0 && radical == 0; }
};

/// Throws DivisionByZeroError when a denominator vanishes at the point.
Evaluation evaluate(const Expr& e, const std::map<Var, mpq_class>& point);

}  // namespace pencil_forge
