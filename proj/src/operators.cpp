#include "pencil_forge/operators.hpp"

#include "pencil_forge/calculus.hpp"
#include "pencil_forge/errors.hpp"

namespace pencil_forge {

ConstantOp ConstantOp::antidiagonal(std::size_t n) {
    ConstantOp a;
    a.eta.assign(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i) a.eta[i][n - 1 - i] = Expr(1);
    return a;
}

NonlocalIsometryOp make_nonlocal(const Metric& g, const Expr& c, const Expr& epsilon, const VectorField& f) {
    return {g, levi_civita(g).contravariant, c, epsilon, f};
}

namespace {

bool free_of(const Expr& e, const std::vector<Var>& coords) {
    for (Var v : free_symbols(e))
        for (Var x : coords)
            if (v == x) return false;
    return true;
}

Verdict tensor_equal(const Tensor3& a, const Tensor3& b, const std::string& name) {
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Expr d = a(i, j, k) - b(i, j, k);
                if (!is_zero(d)) return Verdict::fail(index_label(name, {i, j}, {k}) + " differs by " + render(d));
            }
    return Verdict::pass();
}

}  // namespace

Report validate_local(const LocalFirstOrderOp& op) {
    Report r;
    r.add("symmetric", op.g.symmetric());
    const Connection lc = levi_civita(op.g);
    r.add("levi_civita", tensor_equal(op.gamma, lc.contravariant, "Gamma"));
    r.add("flat", is_flat(riemann(op.g, lc)));
    return r;
}

Report validate_nonlocal(const NonlocalIsometryOp& op, bool fail_fast) {
    Report r;
    auto stop = [&] { return fail_fast && r.first_failure() != nullptr; };
    const std::size_t n = op.dim();
    const Verdict sym = op.g.symmetric();
    r.add("symmetric", sym);

    const auto& x = op.g.coords();
    bool constants = free_of(op.c, x) && free_of(op.epsilon, x);
    r.add("constants", constants, constants ? "" : "c or epsilon depends on the field variables");
    r.add("killing", killing_check(op.g, op.f));
    if (stop()) return r;

    Connection conn;
    conn.contravariant = op.gamma;
    conn.lowered = lower_connection(op.g, op.gamma);

    const Tensor3 defect = metricity_defect(op.g, conn.lowered);
    Verdict compatible;
    for (std::size_t k = 0; k < n && compatible.holds; ++k)
        for (std::size_t i = 0; i < n && compatible.holds; ++i)
            for (std::size_t j = 0; j < n && compatible.holds; ++j)
                if (!is_zero(defect(k, i, j)))
                    compatible = Verdict::fail(index_label("nabla g", {i, j}, {k}) + " = " + render(defect(k, i, j)));
    r.add("compatible_connection", compatible);

    Verdict symmetric;
    for (std::size_t j = 0; j < n && symmetric.holds; ++j)
        for (std::size_t s = 0; s < n && symmetric.holds; ++s)
            for (std::size_t k = s + 1; k < n && symmetric.holds; ++k) {
                Expr d = conn.lowered(j, s, k) - conn.lowered(j, k, s);
                if (!is_zero(d)) symmetric = Verdict::fail("torsion " + index_label("T", {j}, {s, k}) + " = " + render(d));
            }
    r.add("symmetric_connection", symmetric);
    r.add("cyclic", cyclic_check(op.g, conn, op.f));
    if (stop()) return r;

    const Curvature curv = riemann(op.g, conn);
    auto c = constant_curvature(op.g, curv);
    if (!c) {
        Verdict flat = is_flat(curv);
        r.add("constant_curvature", false, "curvature is not constant; " + flat.witness);
    } else {
        Expr d = *c - op.c;
        r.add("constant_curvature", is_zero(d), is_zero(d) ? "" : "curvature " + render(*c) + " but c = " + render(op.c));
    }
    if (stop()) return r;

    if (is_zero(op.c)) {
        Verdict local = sym;
        if (local) {
            Verdict lc = tensor_equal(op.gamma, levi_civita(op.g).contravariant, "Gamma");
            if (!lc) local = Verdict::fail("levi_civita: " + lc.witness);
        }
        if (local) {
            Verdict flat = is_flat(curv);
            if (!flat) local = Verdict::fail("flat: " + flat.witness);
        }
        r.add("local_part", local);
    }
    return r;
}

Matrix liouville_potential(const NonlocalIsometryOp& op) {
    const std::size_t n = op.dim();
    const auto& x = op.g.coords();
    Matrix r(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    Expr d = diff(op.gamma(i, j, k), x[l]) - diff(op.gamma(i, j, l), x[k]);
                    if (!is_zero(d)) {
                        throw NotLiouvilleError("mixed partials of " + index_label("Gamma", {i, j}, {}) +
                                                " disagree in " + symbol_name(x[k]) + ", " + symbol_name(x[l]));
                    }
                }
            Expr acc;
            for (std::size_t k = 0; k < n; ++k) {
                Expr rest = op.gamma(i, j, k) - diff(acc, x[k]);
                if (!rest.is_zero()) acc += antiderivative(rest, x[k]);
            }
            r[i][j] = acc;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Expr d = op.g(i, j) - r[i][j] - r[j][i];
            if (!free_of(d, x)) {
                throw NotLiouvilleError("symmetrized potential misses " + index_label("g", {i, j}, {}) + " by " +
                                        render(d));
            }
            if (i == j) {
                r[i][i] += d * Expr(mpq_class(1, 2));
            } else {
                r[i][j] += d * Expr(mpq_class(1, 2));
                r[j][i] += d * Expr(mpq_class(1, 2));
            }
        }
    return r;
}

Verdict liouville_gauge_equal(const Matrix& r, const Matrix& reference, const std::vector<Var>& coords) {
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Expr a = reference[i][j] - r[i][j];
            Expr b = reference[j][i] - r[j][i];
            if (!free_of(a, coords))
                return Verdict::fail(index_label("r", {i, j}, {}) + " differs by non-constant " + render(a));
            if (!is_zero(a + b))
                return Verdict::fail(index_label("r", {i, j}, {}) + " gauge is not antisymmetric: " + render(a + b));
        }
    return Verdict::pass();
}

Verdict h_potential_check(const NonlocalIsometryOp& op, const ConstantOp& eta, const std::vector<Expr>& h) {
    const std::size_t n = op.dim();
    if (h.size() != n) throw ShapeError("number of potentials does not match the dimension");
    const auto& x = op.g.coords();
    // dh(s, j) = d_s H^j
    Matrix dh(n, std::vector<Expr>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = 0; j < n; ++j) dh[s][j] = diff(h[j], x[s]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expr lead;
            for (std::size_t s = 0; s < n; ++s) lead += eta.eta[i][s] * dh[s][j] + eta.eta[j][s] * dh[s][i];
            Expr d = op.g(i, j) - lead;
            if (!is_zero(d)) return Verdict::fail(index_label("g", {i, j}, {}) + " differs by " + render(d));
            for (std::size_t k = 0; k < n; ++k) {
                Expr sym;
                for (std::size_t s = 0; s < n; ++s) sym += eta.eta[i][s] * diff(dh[s][j], x[k]);
                Expr e = op.gamma(i, j, k) - sym;
                if (!is_zero(e)) return Verdict::fail(index_label("Gamma", {i, j}, {k}) + " differs by " + render(e));
            }
        }
    return Verdict::pass();
}

}  // namespace pencil_forge
