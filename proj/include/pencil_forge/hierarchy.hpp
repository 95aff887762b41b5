#pragma once

#include <utility>
#include <vector>

#include "pencil_forge/context.hpp"
#include "pencil_forge/operators.hpp"

namespace pencil_forge {

using Covector = std::vector<Expr>;

/// u^i_t = V^i_j u^j_x + sigma^i with V, sigma depending on (x, u).
struct QuasilinearFlow {
    Matrix velocity;
    std::vector<Expr> source;

    std::size_t dim() const noexcept { return source.size(); }
    /// Right-hand sides V^i_j u^j_x + sigma^i.
    std::vector<Expr> rhs(const Context& ctx) const;
};

/// Splits right-hand sides that are affine in the first x-jets. Throws ShapeError otherwise.
QuasilinearFlow flow_from_rhs(const std::vector<Expr>& rhs, const Context& ctx);

Verdict flow_equal(const QuasilinearFlow& a, const QuasilinearFlow& b, const Context& ctx);
/// Equal, or equal after negating every component of one side.
Verdict flow_equal_up_to_sign(const QuasilinearFlow& a, const QuasilinearFlow& b, const Context& ctx);

/// Throws ShapeError if the density contains jet variables.
void require_jet_free(const Expr& h, const Context& ctx, const char* what = "density");

/// psi_j = dh/du^j.
Covector variational_gradient(const Expr& h, const Context& ctx);

/// B psi; the kernel f.psi must be free of field variables (NonlocalUnresolvedError) and c = 0.
QuasilinearFlow apply_operator(const NonlocalIsometryOp& b, const Covector& psi, const Context& ctx);

/// eta^{ij} D_x(dh/du^j).
QuasilinearFlow flow_from_density(const ConstantOp& a, const Expr& h, const Context& ctx);

/// phi(x, u) with D_x phi = e for e affine in the first x-jets; NotExactError otherwise.
Expr invert_total_x_derivative(const Expr& e, const Context& ctx);

/// h_{k+1} with A grad h_{k+1} = B grad h_k, integration constants zero.
/// Throws NotExactError / NotClosedError.
Expr magri_step(const ConstantOp& a, const NonlocalIsometryOp& b, const Expr& h, const Context& ctx);

/// One entry of a recursion operator: dx*d_x + mult + sum left_i d_x^{-1} right_i.
struct OperatorSymbol {
    Expr dx;
    Expr mult;
    std::vector<std::pair<Expr, Expr>> nonlocal;

    bool is_zero() const;
};

/// The matrix M in R = M d_x^{-1}.
struct RecursionOperator {
    std::vector<std::vector<OperatorSymbol>> entries;

    std::size_t dim() const noexcept { return entries.size(); }
};

/// Operator symbol of B^{ij}.
OperatorSymbol operator_entry(const NonlocalIsometryOp& b, std::size_t i, std::size_t j, const Context& ctx);

/// M^i_k = B^{is} eta_{sk}.
RecursionOperator recursion_operator(const ConstantOp& a, const NonlocalIsometryOp& b, const Context& ctx);

/// Equality of symbols; nonlocal parts are compared as the bilinear form sum left(u) right(u').
Verdict symbol_equal(const OperatorSymbol& a, const OperatorSymbol& b, const Context& ctx);
Verdict recursion_equal(const RecursionOperator& a, const RecursionOperator& b, const Context& ctx);

/// Text in the matrix-of-symbols layout, e.g. "beta*dx + u_x/2 + dx^-1".
std::string render(const OperatorSymbol& s);

/// u_{ty} - u_{yt} vanishes identically.
Verdict commute_check(const QuasilinearFlow& f1, const QuasilinearFlow& f2, const Context& ctx);

/// a^i_t = eta^{im} (d^2 F / da^m da^k)_x for the k-th coordinate, k = 1..n.
QuasilinearFlow wdvv_flow(const Expr& f, const ConstantOp& eta, std::size_t k, const Context& ctx);

}  // namespace pencil_forge
