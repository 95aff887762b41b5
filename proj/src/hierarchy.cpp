#include "pencil_forge/hierarchy.hpp"

#include "pencil_forge/calculus.hpp"
#include "pencil_forge/errors.hpp"

namespace pencil_forge {

namespace {

std::vector<Var> field_vars(const Context& ctx) {
    std::vector<Var> out;
    for (std::size_t i = 0; i < ctx.dimension(); ++i) out.push_back(ctx.field_var(i));
    return out;
}

Var x_jet_var(const Context& ctx, std::size_t i) { return as_symbol(ctx.jet(i, "x")); }

bool jet_free(const Expr& e, const Context& ctx) { return jet_order(e, ctx) <= 0; }

bool field_free(const Expr& e, const Context& ctx) { return jet_order(e, ctx) < 0; }

}  // namespace

std::vector<Expr> QuasilinearFlow::rhs(const Context& ctx) const {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < dim(); ++i) {
        Expr e = source[i];
        for (std::size_t j = 0; j < dim(); ++j)
            if (!velocity[i][j].is_zero()) e += velocity[i][j] * ctx.jet(j, "x");
        out.push_back(e);
    }
    return out;
}

QuasilinearFlow flow_from_rhs(const std::vector<Expr>& rhs, const Context& ctx) {
    const std::size_t n = ctx.dimension();
    if (rhs.size() != n) throw ShapeError("flow has " + std::to_string(rhs.size()) + " components, expected " + std::to_string(n));
    QuasilinearFlow f;
    f.velocity.assign(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Expr rest = rhs[i];
        for (std::size_t j = 0; j < n; ++j) {
            f.velocity[i][j] = diff(rhs[i], x_jet_var(ctx, j));
            rest -= f.velocity[i][j] * ctx.jet(j, "x");
            if (!jet_free(f.velocity[i][j], ctx)) {
                throw ShapeError("flow component " + std::to_string(i + 1) + " is not quasilinear");
            }
        }
        if (!jet_free(rest, ctx)) throw ShapeError("flow component " + std::to_string(i + 1) + " is not quasilinear");
        f.source.push_back(rest);
    }
    return f;
}

Verdict flow_equal(const QuasilinearFlow& a, const QuasilinearFlow& b, const Context& ctx) {
    auto ra = a.rhs(ctx);
    auto rb = b.rhs(ctx);
    for (std::size_t i = 0; i < ra.size(); ++i) {
        Expr d = ra[i] - rb[i];
        if (!is_zero(d)) return Verdict::fail("component " + ctx.fields()[i] + " differs by " + render(d));
    }
    return Verdict::pass();
}

Verdict flow_equal_up_to_sign(const QuasilinearFlow& a, const QuasilinearFlow& b, const Context& ctx) {
    Verdict same = flow_equal(a, b, ctx);
    if (same) return same;
    QuasilinearFlow nb = b;
    for (auto& row : nb.velocity)
        for (auto& e : row) e = -e;
    for (auto& e : nb.source) e = -e;
    Verdict opposite = flow_equal(a, nb, ctx);
    if (opposite) return {true, "equal up to overall sign"};
    return same;
}

void require_jet_free(const Expr& h, const Context& ctx, const char* what) {
    if (!jet_free(h, ctx)) throw ShapeError(std::string(what) + " must not contain jet variables: " + render(h));
}

Covector variational_gradient(const Expr& h, const Context& ctx) {
    require_jet_free(h, ctx);
    Covector out;
    for (std::size_t j = 0; j < ctx.dimension(); ++j) out.push_back(diff(h, ctx.field_var(j)));
    return out;
}

QuasilinearFlow apply_operator(const NonlocalIsometryOp& b, const Covector& psi, const Context& ctx) {
    const std::size_t n = b.dim();
    if (psi.size() != n) throw ShapeError("covector dimension does not match the operator");
    if (!is_zero(b.c)) throw Error("apply_operator requires curvature constant c = 0");
    for (const auto& p : psi) require_jet_free(p, ctx, "covector");

    Expr kernel;
    for (std::size_t j = 0; j < n; ++j) kernel += b.f[j] * psi[j];
    if (!field_free(kernel, ctx)) {
        throw NonlocalUnresolvedError("nonlocal kernel f.psi = " + render(kernel) + " depends on the field variables");
    }
    const Expr tail = kernel.is_zero() ? Expr() : antiderivative(kernel, ctx.independent_var("x"));

    std::vector<Expr> dpsi;
    for (const auto& p : psi) dpsi.push_back(total_x_derivative(p, ctx));

    std::vector<Expr> rhs;
    for (std::size_t i = 0; i < n; ++i) {
        Expr e;
        for (std::size_t j = 0; j < n; ++j) {
            if (!b.g(i, j).is_zero() && !dpsi[j].is_zero()) e += b.g(i, j) * dpsi[j];
            if (psi[j].is_zero()) continue;
            for (std::size_t k = 0; k < n; ++k)
                if (!b.gamma(i, j, k).is_zero()) e += b.gamma(i, j, k) * ctx.jet(k, "x") * psi[j];
        }
        if (!tail.is_zero()) e += b.epsilon * b.f[i] * tail;
        rhs.push_back(e);
    }
    return flow_from_rhs(rhs, ctx);
}

QuasilinearFlow flow_from_density(const ConstantOp& a, const Expr& h, const Context& ctx) {
    Covector psi = variational_gradient(h, ctx);
    std::vector<Expr> dpsi;
    for (const auto& p : psi) dpsi.push_back(total_x_derivative(p, ctx));
    std::vector<Expr> rhs;
    for (std::size_t i = 0; i < ctx.dimension(); ++i) {
        Expr e;
        for (std::size_t j = 0; j < ctx.dimension(); ++j) e += a.eta[i][j] * dpsi[j];
        rhs.push_back(e);
    }
    return flow_from_rhs(rhs, ctx);
}

namespace {

/// Potential of the closed form sum coeffs[k] d vars[k]; nullopt if not closed.
std::optional<Expr> integrate_form(const std::vector<Expr>& coeffs, const std::vector<Var>& vars) {
    for (std::size_t k = 0; k < vars.size(); ++k)
        for (std::size_t l = k + 1; l < vars.size(); ++l)
            if (!is_zero(diff(coeffs[k], vars[l]) - diff(coeffs[l], vars[k]))) return std::nullopt;
    Expr acc;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        Expr rest = coeffs[k] - diff(acc, vars[k]);
        if (!rest.is_zero()) acc += antiderivative(rest, vars[k]);
    }
    return acc;
}

}  // namespace

Expr invert_total_x_derivative(const Expr& e, const Context& ctx) {
    const std::size_t n = ctx.dimension();
    std::vector<Expr> coeffs;
    std::vector<Var> vars = field_vars(ctx);
    Expr rest = e;
    for (std::size_t k = 0; k < n; ++k) {
        Expr a = diff(e, x_jet_var(ctx, k));
        if (!jet_free(a, ctx)) throw NotExactError(render(e) + " is not a total x-derivative of a hydrodynamic function");
        coeffs.push_back(a);
        rest -= a * ctx.jet(k, "x");
    }
    if (!jet_free(rest, ctx)) throw NotExactError(render(e) + " is not a total x-derivative of a hydrodynamic function");
    coeffs.push_back(rest);
    vars.push_back(ctx.independent_var("x"));
    auto phi = integrate_form(coeffs, vars);
    if (!phi) throw NotExactError(render(e) + " is not a total x-derivative");
    return *phi;
}

Expr magri_step(const ConstantOp& a, const NonlocalIsometryOp& b, const Expr& h, const Context& ctx) {
    const std::size_t n = ctx.dimension();
    const QuasilinearFlow q = apply_operator(b, variational_gradient(h, ctx), ctx);
    const auto rhs = q.rhs(ctx);
    std::vector<Expr> phi;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            phi.push_back(invert_total_x_derivative(rhs[i], ctx));
        } catch (const NotExactError& e) {
            throw NotExactError("component " + ctx.fields()[i] + ": " + e.what());
        }
    }
    const Matrix low = inverse(a.eta);
    std::vector<Expr> grad(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) grad[j] += low[j][i] * phi[i];
    auto next = integrate_form(grad, field_vars(ctx));
    if (!next) throw NotClosedError("candidate gradient is not closed");
    return *next;
}

bool OperatorSymbol::is_zero() const {
    if (!dx.is_zero() || !mult.is_zero()) return false;
    for (const auto& [l, r] : nonlocal)
        if (!l.is_zero() && !r.is_zero()) return false;
    return true;
}

OperatorSymbol operator_entry(const NonlocalIsometryOp& b, std::size_t i, std::size_t j, const Context& ctx) {
    OperatorSymbol s;
    s.dx = b.g(i, j);
    for (std::size_t k = 0; k < b.dim(); ++k)
        if (!b.gamma(i, j, k).is_zero()) s.mult += b.gamma(i, j, k) * ctx.jet(k, "x");
    const Expr tail_left = b.epsilon * b.f[i];
    if (!tail_left.is_zero() && !b.f[j].is_zero()) s.nonlocal.emplace_back(tail_left, b.f[j]);
    if (!b.c.is_zero()) s.nonlocal.emplace_back(b.c * ctx.jet(i, "x"), ctx.jet(j, "x"));
    return s;
}

RecursionOperator recursion_operator(const ConstantOp& a, const NonlocalIsometryOp& b, const Context& ctx) {
    const std::size_t n = b.dim();
    const Matrix low = inverse(a.eta);
    RecursionOperator r;
    r.entries.assign(n, std::vector<OperatorSymbol>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            OperatorSymbol& m = r.entries[i][k];
            for (std::size_t s = 0; s < n; ++s) {
                if (low[s][k].is_zero()) continue;
                OperatorSymbol e = operator_entry(b, i, s, ctx);
                m.dx += e.dx * low[s][k];
                m.mult += e.mult * low[s][k];
                for (const auto& [left, right] : e.nonlocal) {
                    Expr scaled = right * low[s][k];
                    bool merged = false;
                    for (auto& [l2, r2] : m.nonlocal) {
                        if (l2 == left) {
                            r2 += scaled;
                            merged = true;
                            break;
                        }
                    }
                    if (!merged) m.nonlocal.emplace_back(left, scaled);
                }
            }
            std::erase_if(m.nonlocal, [](const auto& p) { return p.first.is_zero() || p.second.is_zero(); });
        }
    return r;
}

namespace {

Expr bilinear(const std::vector<std::pair<Expr, Expr>>& terms, const Context& ctx) {
    Expr out;
    for (const auto& [left, right] : terms) {
        Substitution primed;
        for (Var y : jets_in(right, ctx)) primed.symbols.emplace(y, Expr::symbol(symbol_name(y) + "__r"));
        out += left * substitute(right, primed);
    }
    return out;
}

}  // namespace

Verdict symbol_equal(const OperatorSymbol& a, const OperatorSymbol& b, const Context& ctx) {
    Expr d = a.dx - b.dx;
    if (!is_zero(d)) return Verdict::fail("d_x coefficient differs by " + render(d));
    d = a.mult - b.mult;
    if (!is_zero(d)) return Verdict::fail("multiplication part differs by " + render(d));
    d = bilinear(a.nonlocal, ctx) - bilinear(b.nonlocal, ctx);
    if (!is_zero(d)) return Verdict::fail("nonlocal part differs by " + render(d));
    return Verdict::pass();
}

Verdict recursion_equal(const RecursionOperator& a, const RecursionOperator& b, const Context& ctx) {
    if (a.dim() != b.dim()) return Verdict::fail("dimension mismatch");
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) {
            Verdict v = symbol_equal(a.entries[i][k], b.entries[i][k], ctx);
            if (!v) return Verdict::fail("entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "): " + v.witness);
        }
    return Verdict::pass();
}

namespace {

std::string factor_text(const Expr& e) {
    std::string s = render(e);
    if (s.find(' ') != std::string::npos) return "(" + s + ")";
    return s;
}

void append_term(std::string& out, std::string term) {
    if (out.empty()) {
        out = std::move(term);
    } else if (term[0] == '-') {
        out += " - " + term.substr(1);
    } else {
        out += " + " + term;
    }
}

}  // namespace

std::string render(const OperatorSymbol& s) {
    std::string out;
    if (!s.dx.is_zero()) {
        std::string c = factor_text(s.dx);
        if (c == "1") {
            append_term(out, "dx");
        } else if (c == "-1") {
            append_term(out, "-dx");
        } else {
            append_term(out, c + "*dx");
        }
    }
    if (!s.mult.is_zero()) {
        append_term(out, render(s.mult));
    }
    for (const auto& [left, right] : s.nonlocal) {
        const bool flip = render(right)[0] == '-';
        std::string l = factor_text(flip ? -left : left);
        std::string r = factor_text(flip ? -right : right);
        std::string t;
        if (l == "1") {
            t = "dx^-1";
        } else if (l == "-1") {
            t = "-dx^-1";
        } else {
            t = l + "*dx^-1";
        }
        if (r == "-1") {
            t = t[0] == '-' ? t.substr(1) : "-" + t;
        } else if (r != "1") {
            t += "*" + r;
        }
        append_term(out, t);
    }
    return out.empty() ? "0" : out;
}

Verdict commute_check(const QuasilinearFlow& f1, const QuasilinearFlow& f2, const Context& ctx) {
    const std::size_t n = ctx.dimension();
    const auto p = f1.rhs(ctx);
    const auto q = f2.rhs(ctx);
    std::vector<Expr> dp, dq;
    for (std::size_t k = 0; k < n; ++k) {
        dp.push_back(total_x_derivative(p[k], ctx));
        dq.push_back(total_x_derivative(q[k], ctx));
    }
    auto directional = [&](const std::vector<Expr>& e, const std::vector<Expr>& along, const std::vector<Expr>& along_x,
                           std::size_t i) {
        Expr out;
        for (std::size_t k = 0; k < n; ++k) {
            Expr a = diff(e[i], ctx.field_var(k));
            if (!a.is_zero()) out += a * along[k];
            Expr b = diff(e[i], x_jet_var(ctx, k));
            if (!b.is_zero()) out += b * along_x[k];
        }
        return out;
    };
    for (std::size_t i = 0; i < n; ++i) {
        Expr residual = directional(p, q, dq, i) - directional(q, p, dp, i);
        if (!is_zero(residual)) return Verdict::fail("component " + ctx.fields()[i] + ": u_ty - u_yt = " + render(residual));
    }
    return Verdict::pass();
}

QuasilinearFlow wdvv_flow(const Expr& f, const ConstantOp& eta, std::size_t k, const Context& ctx) {
    const std::size_t n = ctx.dimension();
    if (k < 1 || k > n) throw ShapeError("flow index must lie in 1.." + std::to_string(n));
    require_jet_free(f, ctx, "potential");
    const Expr fk = diff(f, ctx.field_var(k - 1));
    std::vector<Expr> second;
    for (std::size_t m = 0; m < n; ++m) second.push_back(total_x_derivative(diff(fk, ctx.field_var(m)), ctx));
    std::vector<Expr> rhs;
    for (std::size_t i = 0; i < n; ++i) {
        Expr e;
        for (std::size_t m = 0; m < n; ++m) e += eta.eta[i][m] * second[m];
        rhs.push_back(e);
    }
    return flow_from_rhs(rhs, ctx);
}

}  // namespace pencil_forge
