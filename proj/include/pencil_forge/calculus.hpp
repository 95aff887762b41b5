#pragma once

#include <string_view>

#include "pencil_forge/context.hpp"
#include "pencil_forge/expr.hpp"

namespace pencil_forge {

/// Total derivative with respect to an independent variable of the context:
/// D e = de/dx + sum over jets y occurring in e of (de/dy) * D y.
/// Throws JetOrderError when a jet would exceed ctx.max_jet_order().
Expr total_derivative(const Expr& e, const Context& ctx, std::string_view independent);

inline Expr total_x_derivative(const Expr& e, const Context& ctx) { return total_derivative(e, ctx, "x"); }

/// Jet variables (including plain fields) of the context occurring in e,
/// looking inside atom arguments.
std::vector<Var> jets_in(const Expr& e, const Context& ctx);

/// Highest total jet order in e; 0 for field-only expressions, -1 if no field occurs.
int jet_order(const Expr& e, const Context& ctx);

/// E with dE/ds = e. Rational integrands are handled by polynomial division,
/// Hermite reduction and logarithms of linear (or rationally split) factors;
/// a radical independent of s is carried along. Throws NotIntegrableError
/// otherwise.
Expr antiderivative(const Expr& e, Var s);
inline Expr antiderivative(const Expr& e, const Expr& s) { return antiderivative(e, as_symbol(s)); }

}  // namespace pencil_forge
