#pragma once

#include <optional>
#include <vector>

#include "pencil_forge/diffgeo.hpp"
#include "pencil_forge/report.hpp"

namespace pencil_forge {

/// g^{ij} d_x + Gamma^{ij}_k u^k_x
struct LocalFirstOrderOp {
    Metric g;
    Tensor3 gamma;  ///< Gamma^{ij}_k as gamma(i, j, k)
};

/// g^{ij} d_x + Gamma^{ij}_k u^k_x + c u^i_x d_x^{-1} u^j_x + eps f^i d_x^{-1} f^j
struct NonlocalIsometryOp {
    Metric g;
    Tensor3 gamma;
    Expr c;
    Expr epsilon;
    VectorField f;

    std::size_t dim() const noexcept { return g.dim(); }
    LocalFirstOrderOp local_part() const { return {g, gamma}; }
};

/// eta^{ij} d_x with constant eta.
struct ConstantOp {
    Matrix eta;

    std::size_t dim() const noexcept { return eta.size(); }
    Metric metric(const std::vector<Var>& coords) const { return Metric(eta, coords); }
    /// The antidiagonal identity of size n.
    static ConstantOp antidiagonal(std::size_t n);
};

/// Operator whose symbols are the Levi-Civita ones of g.
NonlocalIsometryOp make_nonlocal(const Metric& g, const Expr& c, const Expr& epsilon, const VectorField& f);

/// Checks "symmetric", "levi_civita", "flat". Throws DegenerateMetricError.
Report validate_local(const LocalFirstOrderOp& op);

/// Checks "symmetric", "constants", "killing", "compatible_connection",
/// "symmetric_connection", "cyclic", "constant_curvature" and, when c = 0,
/// "local_part". With fail_fast the cheap checks run first and the report
/// ends at the first stage with a failure. Throws DegenerateMetricError.
Report validate_nonlocal(const NonlocalIsometryOp& op, bool fail_fast = false);

/// r with d r^{ij}/du^k = Gamma^{ij}_k and r + r^T = g, constants split
/// symmetrically. Throws NotLiouvilleError.
Matrix liouville_potential(const NonlocalIsometryOp& op);

/// True when reference - r is a constant antisymmetric matrix (the gauge freedom of r).
Verdict liouville_gauge_equal(const Matrix& r, const Matrix& reference, const std::vector<Var>& coords);

/// g^{ij} = eta^{is} d_s H^j + eta^{js} d_s H^i and Gamma^{ij}_k = eta^{is} d_s d_k H^j.
Verdict h_potential_check(const NonlocalIsometryOp& op, const ConstantOp& eta, const std::vector<Expr>& h);

}  // namespace pencil_forge
