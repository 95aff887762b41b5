#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pencil_forge/expr.hpp"

namespace pencil_forge {

using Matrix = std::vector<std::vector<Expr>>;
using VectorField = std::vector<Expr>;

/// Dense n^3 array, index order as written: t(i, j, k).
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n) {}
    std::size_t dim() const noexcept { return n_; }
    Expr& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
    const Expr& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * n_ + j) * n_ + k]; }

private:
    std::size_t n_ = 0;
    std::vector<Expr> data_;
};

/// Dense n^4 array, index order as written: t(i, j, k, l).
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n) {}
    std::size_t dim() const noexcept { return n_; }
    Expr& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return data_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    const Expr& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return data_[((i * n_ + j) * n_ + k) * n_ + l];
    }

private:
    std::size_t n_ = 0;
    std::vector<Expr> data_;
};

/// Outcome of a symbolic check. When it fails, `witness` names the first
/// component that did not vanish together with its normal form.
struct Verdict {
    bool holds = true;
    std::string witness;

    explicit operator bool() const noexcept { return holds; }
    static Verdict pass() { return {}; }
    static Verdict fail(std::string witness) { return {false, std::move(witness)}; }
};

/// Contravariant metric g^{ij} in the coordinates `coords` (the field variables).
class Metric {
public:
    Metric() = default;
    Metric(Matrix entries, std::vector<Var> coords);

    std::size_t dim() const noexcept { return g_.size(); }
    const Matrix& entries() const noexcept { return g_; }
    const Expr& operator()(std::size_t i, std::size_t j) const { return g_[i][j]; }
    const std::vector<Var>& coords() const noexcept { return coords_; }

    Verdict symmetric() const;
    /// det g^{ij}; nondegeneracy means this is not identically zero.
    Expr determinant() const;
    /// Covariant metric g_{ij}. Throws DegenerateMetricError.
    Matrix covariant() const;

private:
    Matrix g_;
    std::vector<Var> coords_;
};

Expr determinant(const Matrix& m);
/// Exact inverse by adjugate. Throws DegenerateMetricError when det is identically zero.
Matrix inverse(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, const Expr& k);
Matrix transpose(const Matrix& a);

struct Connection {
    Tensor3 lowered;        ///< Gamma^i_{jk}: lowered(i, j, k)
    Tensor3 contravariant;  ///< Gamma^{ij}_k: contravariant(i, j, k)
};

/// Curvature of the Levi-Civita connection.
///   mixed(i,j,k,l)  = R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{ks} G^s_{lj} - G^i_{ls} G^s_{kj}
///   raised(i,j,k,l) = R^{ij}_{kl} = g^{js} R^i_{skl}
struct Curvature {
    Tensor4 mixed;
    Tensor4 raised;
};

/// Contravariant symbols from lowered ones: Gamma^{ij}_k = -g^{is} Gamma^j_{sk}.
Tensor3 raise_connection(const Metric& g, const Tensor3& lowered);
/// Lowered symbols from contravariant ones: Gamma^j_{sk} = -g_{si} Gamma^{ij}_k.
Tensor3 lower_connection(const Metric& g, const Tensor3& contravariant);

Connection levi_civita(const Metric& g);
Curvature riemann(const Metric& g);
Curvature riemann(const Metric& g, const Connection& conn);

Verdict is_flat(const Metric& g);
Verdict is_flat(const Curvature& r);
/// c when R^{ij}_{kl} = c (d^i_k d^j_l - d^i_l d^j_k) for c free of the coordinates.
std::optional<Expr> constant_curvature(const Metric& g);
std::optional<Expr> constant_curvature(const Metric& g, const Curvature& r);

/// Lie derivative of the contravariant metric along f.
Matrix lie_derivative(const Metric& g, const VectorField& f);
Verdict killing_check(const Metric& g, const VectorField& f);
Verdict cyclic_check(const Metric& g, const VectorField& f);
Verdict cyclic_check(const Metric& g, const Connection& conn, const VectorField& f);

/// nabla_k g^{ij} = d_k g^{ij} + G^i_{ks} g^{sj} + G^j_{ks} g^{is}.
Tensor3 metricity_defect(const Metric& g, const Tensor3& lowered);

/// Human-readable index label, 1-based: label("R", {1,2}, {1,2}) = "R^12_12".
std::string index_label(const std::string& name, const std::vector<std::size_t>& upper,
                        const std::vector<std::size_t>& lower);

}  // namespace pencil_forge
