#include "pencil_forge/diffgeo.hpp"

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

std::string index_label(const std::string& name, const std::vector<std::size_t>& upper,
                        const std::vector<std::size_t>& lower) {
    std::string s = name;
    if (!upper.empty()) {
        s += "^";
        for (auto i : upper) s += std::to_string(i + 1);
    }
    if (!lower.empty()) {
        s += "_";
        for (auto i : lower) s += std::to_string(i + 1);
    }
    return s;
}

namespace {

std::string describe(const std::string& label, const Expr& value) { return label + " = " + render(value); }

}  // namespace

Metric::Metric(Matrix entries, std::vector<Var> coords) : g_(std::move(entries)), coords_(std::move(coords)) {
    for (const auto& row : g_) {
        if (row.size() != g_.size()) throw ShapeError("metric must be square");
    }
    if (coords_.size() != g_.size()) throw ShapeError("metric dimension does not match the coordinates");
}

Verdict Metric::symmetric() const {
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j) {
            Expr d = g_[i][j] - g_[j][i];
            if (!is_zero(d)) return Verdict::fail(describe(index_label("g", {i, j}, {}) + " - " + index_label("g", {j, i}, {}), d));
        }
    return Verdict::pass();
}

Expr Metric::determinant() const { return pencil_forge::determinant(g_); }

Matrix Metric::covariant() const { return inverse(g_); }

namespace {

Matrix minor_of(const Matrix& m, std::size_t row, std::size_t col) {
    Matrix out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == row) continue;
        std::vector<Expr> r;
        for (std::size_t j = 0; j < m.size(); ++j)
            if (j != col) r.push_back(m[i][j]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

Expr determinant(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return Expr(1);
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Expr d;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        Expr term = m[0][j] * determinant(minor_of(m, 0, j));
        d += (j % 2 == 0) ? term : -term;
    }
    return d;
}

Matrix inverse(const Matrix& m) {
    const std::size_t n = m.size();
    Expr det = determinant(m);
    if (is_zero(det)) throw DegenerateMetricError("determinant vanishes identically");
    Expr inv_det = Expr(1) / det;
    Matrix out(n, std::vector<Expr>(n));
    if (n == 1) {
        out[0][0] = inv_det;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expr cof = determinant(minor_of(m, j, i));
            out[i][j] = ((i + j) % 2 == 0 ? cof : -cof) * inv_det;
        }
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
    return out;
}

Matrix scale(const Matrix& a, const Expr& k) {
    Matrix out = a;
    for (auto& row : out)
        for (auto& x : row) x *= k;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.empty() ? 0 : a[0].size(), std::vector<Expr>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
    return out;
}

Tensor3 raise_connection(const Metric& g, const Tensor3& lowered) {
    const std::size_t n = g.dim();
    Tensor3 out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Expr s;
                for (std::size_t m = 0; m < n; ++m) {
                    if (g(i, m).is_zero() || lowered(j, m, k).is_zero()) continue;
                    s -= g(i, m) * lowered(j, m, k);
                }
                out(i, j, k) = s;
            }
    return out;
}

Tensor3 lower_connection(const Metric& g, const Tensor3& contravariant) {
    const std::size_t n = g.dim();
    const Matrix low = g.covariant();
    Tensor3 out(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t k = 0; k < n; ++k) {
                Expr acc;
                for (std::size_t i = 0; i < n; ++i) {
                    if (low[s][i].is_zero() || contravariant(i, j, k).is_zero()) continue;
                    acc -= low[s][i] * contravariant(i, j, k);
                }
                out(j, s, k) = acc;
            }
    return out;
}

Connection levi_civita(const Metric& g) {
    const std::size_t n = g.dim();
    const Matrix low = g.covariant();
    const auto& x = g.coords();

    // d_k g_{ij}
    std::vector<Matrix> dlow(n, Matrix(n, std::vector<Expr>(n)));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                dlow[k][i][j] = diff(low[i][j], x[k]);
                dlow[k][j][i] = dlow[k][i][j];
            }

    // Gamma_{m jk} = (d_j g_{mk} + d_k g_{mj} - d_m g_{jk}) / 2
    Tensor3 first(n);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                first(m, j, k) = (dlow[j][m][k] + dlow[k][m][j] - dlow[m][j][k]) * Expr(mpq_class(1, 2));
                first(m, k, j) = first(m, j, k);
            }

    Connection c;
    c.lowered = Tensor3(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                Expr s;
                for (std::size_t m = 0; m < n; ++m) {
                    if (g(i, m).is_zero() || first(m, j, k).is_zero()) continue;
                    s += g(i, m) * first(m, j, k);
                }
                c.lowered(i, j, k) = s;
                c.lowered(i, k, j) = s;
            }
    c.contravariant = raise_connection(g, c.lowered);
    return c;
}

Curvature riemann(const Metric& g) { return riemann(g, levi_civita(g)); }

Curvature riemann(const Metric& g, const Connection& conn) {
    const std::size_t n = g.dim();
    const auto& x = g.coords();
    const Tensor3& G = conn.lowered;

    std::vector<Tensor3> dG(n, Tensor3(n));  // dG[k](i,l,j) = d_k G^i_{lj}
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t j = l; j < n; ++j) {
                    dG[k](i, l, j) = diff(G(i, l, j), x[k]);
                    dG[k](i, j, l) = dG[k](i, l, j);
                }

    Curvature r;
    r.mixed = Tensor4(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    Expr v = dG[k](i, l, j) - dG[l](i, k, j);
                    for (std::size_t s = 0; s < n; ++s) {
                        if (!G(i, k, s).is_zero() && !G(s, l, j).is_zero()) v += G(i, k, s) * G(s, l, j);
                        if (!G(i, l, s).is_zero() && !G(s, k, j).is_zero()) v -= G(i, l, s) * G(s, k, j);
                    }
                    r.mixed(i, j, k, l) = v;
                    r.mixed(i, j, l, k) = -v;
                }

    r.raised = Tensor4(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    Expr v;
                    for (std::size_t s = 0; s < n; ++s) {
                        if (g(j, s).is_zero() || r.mixed(i, s, k, l).is_zero()) continue;
                        v += g(j, s) * r.mixed(i, s, k, l);
                    }
                    r.raised(i, j, k, l) = v;
                    r.raised(i, j, l, k) = -v;
                }
    return r;
}

Verdict is_flat(const Curvature& r) {
    const std::size_t n = r.raised.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    const Expr& v = r.raised(i, j, k, l);
                    if (!is_zero(v)) return Verdict::fail(describe(index_label("R", {i, j}, {k, l}), v));
                }
    return Verdict::pass();
}

Verdict is_flat(const Metric& g) { return is_flat(riemann(g)); }

std::optional<Expr> constant_curvature(const Metric& g) { return constant_curvature(g, riemann(g)); }

std::optional<Expr> constant_curvature(const Metric& g, const Curvature& r) {
    const std::size_t n = g.dim();
    if (n < 2) return Expr(0);
    const Expr c = r.raised(0, 1, 0, 1);
    for (Var v : free_symbols(c)) {
        for (Var x : g.coords())
            if (v == x) return std::nullopt;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    Expr expected;
                    if (i == k && j == l) expected += c;
                    if (i == l && j == k) expected -= c;
                    if (!is_zero(r.raised(i, j, k, l) - expected)) return std::nullopt;
                }
    return c;
}

Matrix lie_derivative(const Metric& g, const VectorField& f) {
    const std::size_t n = g.dim();
    if (f.size() != n) throw ShapeError("vector field dimension does not match the metric");
    const auto& x = g.coords();
    std::vector<std::vector<Expr>> df(n, std::vector<Expr>(n));  // df[k][i] = d_k f^i
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) df[k][i] = diff(f[i], x[k]);
    Matrix out(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expr v;
            for (std::size_t k = 0; k < n; ++k) {
                if (!f[k].is_zero()) v += f[k] * diff(g(i, j), x[k]);
                if (!df[k][i].is_zero()) v -= g(k, j) * df[k][i];
                if (!df[k][j].is_zero()) v -= g(i, k) * df[k][j];
            }
            out[i][j] = v;
        }
    return out;
}

Verdict killing_check(const Metric& g, const VectorField& f) {
    const Matrix l = lie_derivative(g, f);
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i; j < g.dim(); ++j)
            if (!is_zero(l[i][j])) return Verdict::fail(describe("(L_f g)" + index_label("", {i, j}, {}), l[i][j]));
    return Verdict::pass();
}

Verdict cyclic_check(const Metric& g, const VectorField& f) { return cyclic_check(g, levi_civita(g), f); }

Verdict cyclic_check(const Metric& g, const Connection& conn, const VectorField& f) {
    const std::size_t n = g.dim();
    if (f.size() != n) throw ShapeError("vector field dimension does not match the metric");
    const auto& x = g.coords();
    // lower nabla: D(s, k) = d_s f^k + G^k_{sm} f^m
    Matrix D(n, std::vector<Expr>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t k = 0; k < n; ++k) {
            Expr v = diff(f[k], x[s]);
            for (std::size_t m = 0; m < n; ++m)
                if (!conn.lowered(k, s, m).is_zero() && !f[m].is_zero()) v += conn.lowered(k, s, m) * f[m];
            D[s][k] = v;
        }
    // upper nabla: U(i, k) = g^{is} D(s, k)
    Matrix U(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Expr v;
            for (std::size_t s = 0; s < n; ++s)
                if (!g(i, s).is_zero() && !D[s][k].is_zero()) v += g(i, s) * D[s][k];
            U[i][k] = v;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Expr v = f[j] * U[i][k] + f[k] * U[j][i] + f[i] * U[k][j];
                if (!is_zero(v)) return Verdict::fail(describe("cyclic" + index_label("", {i, j, k}, {}), v));
            }
    return Verdict::pass();
}

Tensor3 metricity_defect(const Metric& g, const Tensor3& lowered) {
    const std::size_t n = g.dim();
    const auto& x = g.coords();
    Tensor3 out(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Expr v = diff(g(i, j), x[k]);
                for (std::size_t s = 0; s < n; ++s) {
                    v += lowered(i, k, s) * g(s, j);
                    v += lowered(j, k, s) * g(i, s);
                }
                out(k, i, j) = v;
            }
    return out;
}

}  // namespace pencil_forge
