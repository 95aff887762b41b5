#include "pencil_forge/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "pencil_forge/calculus.hpp"
#include "pencil_forge/errors.hpp"
#include "pencil_forge/pencil.hpp"

namespace pencil_forge {

// ---------------------------------------------------------------- loading

Expr LoadedCase::parse(const std::string& text) const {
    Expr e = ctx.parse(text);
    return bindings.empty() ? e : substitute(e, bindings);
}

NonlocalIsometryOp LoadedCase::op() const { return make_nonlocal(metric, c, epsilon, isometry); }

LoadedCase load_case(const CaseRecord& record) {
    const std::size_t n = record.n;
    if (n == 0) throw ShapeError("case '" + record.name + "' has dimension 0");
    if (record.coordinates.size() != n) throw ShapeError("case '" + record.name + "': coordinates do not match n");
    if (record.metric.size() != n) throw ShapeError("case '" + record.name + "': metric is not n x n");
    for (const auto& row : record.metric)
        if (row.size() != n) throw ShapeError("case '" + record.name + "': metric is not n x n");
    if (record.isometry.size() != n) throw ShapeError("case '" + record.name + "': isometry has wrong length");

    LoadedCase lc;
    lc.ctx = Context(record.coordinates);
    for (const auto& p : record.parameters) lc.ctx.add_parameter(p.name);
    for (const auto& f : record.functions) lc.ctx.add_function(f.name);
    for (const auto& p : record.parameters)
        if (!p.nonzero.empty()) lc.ctx.assume_nonzero(p.nonzero);
    for (const auto& f : record.functions)
        if (!f.nonzero.empty()) lc.ctx.assume_nonzero(f.nonzero);
    for (const auto& [name, text] : record.bindings) {
        if (!lc.ctx.is_parameter(name)) throw ShapeError("binding for '" + name + "', which is not a parameter");
        lc.bindings.symbols[SymbolTable::instance().plain(name)] = lc.ctx.parse(text);
    }

    std::vector<Var> coords;
    for (std::size_t i = 0; i < n; ++i) coords.push_back(lc.ctx.field_var(i));
    Matrix g(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i][j] = lc.parse(record.metric[i][j]);
    lc.metric = Metric(std::move(g), coords);
    for (const auto& text : record.isometry) lc.isometry.push_back(lc.parse(text));
    lc.epsilon = lc.parse(record.epsilon);
    lc.c = lc.parse(record.c);
    lc.eta = ConstantOp::antidiagonal(n);
    return lc;
}

CaseRecord inject_fault(const CaseRecord& record, std::size_t i, std::size_t j) {
    CaseRecord out = record;
    std::string& entry = out.metric.at(i).at(j);
    entry = "(" + entry + ") + " + out.coordinates.at(0);
    return out;
}

// ---------------------------------------------------------------- verification

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class Runner {
public:
    Runner(Report& report, const CaseRecord& record, const VerifyOptions& options)
        : report_(report), record_(record), options_(options) {}

    bool stopped() const { return stopped_; }

    template <class F>
    void check(const std::string& name, F&& body) {
        if (stopped_) return;
        const auto start = Clock::now();
        CheckResult result;
        result.name = name;
        try {
            Verdict v = body();
            result.status = v.holds ? Status::pass : Status::fail;
            result.detail = v.witness;
        } catch (const std::exception& e) {
            result.status = Status::error;
            result.detail = e.what();
        }
        result.seconds = seconds_since(start);
        record(std::move(result));
    }

    template <class F>
    void group(const std::string& prefix, F&& body) {
        if (stopped_) return;
        const auto start = Clock::now();
        Report sub;
        try {
            sub = body();
        } catch (const std::exception& e) {
            record({prefix, Status::error, e.what(), seconds_since(start)});
            return;
        }
        const double each = sub.checks.empty() ? 0 : seconds_since(start) / static_cast<double>(sub.checks.size());
        for (auto& c : sub.checks) {
            c.name = prefix + "." + c.name;
            c.seconds = each;
            record(std::move(c));
            if (stopped_) return;
        }
    }

    void skipped(const std::string& name, const std::string& note) {
        if (!stopped_) report_.add_skipped(name, note);
    }

private:
    void record(CheckResult result) {
        const auto& xf = record_.expected_failures;
        if (std::find(xf.begin(), xf.end(), result.name) != xf.end()) {
            if (result.status == Status::fail) {
                result.status = Status::pass;
                result.detail = "fails as expected: " + result.detail;
            } else if (result.status == Status::pass) {
                result.status = Status::fail;
                result.detail = "expected to fail";
            }
        }
        if (options_.fail_fast && (result.status == Status::fail || result.status == Status::error)) stopped_ = true;
        report_.checks.push_back(std::move(result));
    }

    Report& report_;
    const CaseRecord& record_;
    const VerifyOptions& options_;
    bool stopped_ = false;
};

LoadedCase load_specialized(const CaseRecord& record, const std::map<std::string, std::string>& extra) {
    if (extra.empty()) return load_case(record);
    CaseRecord copy = record;
    for (const auto& [k, v] : extra) copy.bindings[k] = v;
    return load_case(copy);
}

Verdict christoffel_reference(const LoadedCase& lc, const NonlocalIsometryOp& op,
                              const std::vector<std::vector<std::vector<std::string>>>& table) {
    const std::size_t n = op.dim();
    if (table.size() != n) throw ShapeError("Christoffel reference has wrong shape");
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].size() != n) throw ShapeError("Christoffel reference has wrong shape");
        for (std::size_t j = 0; j < n; ++j) {
            if (table[i][j].size() != n) throw ShapeError("Christoffel reference has wrong shape");
            for (std::size_t k = 0; k < n; ++k) {
                const Expr expected = lc.parse(table[i][j][k]);
                if (!is_zero(op.gamma(i, j, k) - expected))
                    return Verdict::fail(index_label("Gamma", {i, j}, {k}) + " = " + render(op.gamma(i, j, k)) +
                                         ", reference " + render(expected));
            }
        }
    }
    return Verdict::pass();
}

Matrix parse_matrix(const LoadedCase& lc, const std::vector<std::vector<std::string>>& text) {
    Matrix m;
    for (const auto& row : text) {
        std::vector<Expr> r;
        for (const auto& s : row) r.push_back(lc.parse(s));
        m.push_back(std::move(r));
    }
    return m;
}

OperatorSymbol parse_symbol(const LoadedCase& lc, const SymbolText& s) {
    OperatorSymbol out{lc.parse(s.dx), lc.parse(s.mult), {}};
    for (const auto& [l, r] : s.nonlocal) out.nonlocal.emplace_back(lc.parse(l), lc.parse(r));
    return out;
}

Verdict recursion_reference(const CaseRecord& record, const RecursionReference& ref) {
    const LoadedCase lc = load_specialized(record, ref.substitute);
    const RecursionOperator computed = recursion_operator(lc.eta, lc.op(), lc.ctx);
    RecursionOperator expected;
    for (const auto& row : ref.matrix) {
        std::vector<OperatorSymbol> r;
        for (const auto& s : row) r.push_back(parse_symbol(lc, s));
        expected.entries.push_back(std::move(r));
    }
    return recursion_equal(computed, expected, lc.ctx);
}

Verdict flow_reference(const CaseRecord& record, const FlowReference& ref) {
    const LoadedCase lc = load_specialized(record, ref.substitute);
    const Context& ctx = lc.ctx;
    std::vector<Expr> rhs;
    for (const auto& s : ref.expected) rhs.push_back(lc.parse(s));
    const QuasilinearFlow expected = flow_from_rhs(rhs, ctx);
    QuasilinearFlow computed;
    if (ref.kind == "apply") {
        Covector psi;
        for (const auto& s : ref.covector) psi.push_back(lc.parse(s));
        computed = apply_operator(lc.op(), psi, ctx);
    } else if (ref.kind == "density") {
        computed = flow_from_density(lc.eta, lc.parse(ref.density), ctx);
    } else if (ref.kind == "magri") {
        const Expr h = magri_step(lc.eta, lc.op(), lc.parse(ref.density), ctx);
        if (!ref.expected_density.empty()) {
            const Expr expected_h = lc.parse(ref.expected_density);
            if (!is_zero(h - expected_h))
                return Verdict::fail("h1 = " + render(h) + ", reference " + render(expected_h));
        }
        computed = flow_from_density(lc.eta, h, ctx);
    } else {
        throw ShapeError("unknown flow reference kind '" + ref.kind + "'");
    }
    return ref.up_to_sign ? flow_equal_up_to_sign(computed, expected, ctx) : flow_equal(computed, expected, ctx);
}

Verdict zero_verdict(const Expr& e, const std::string& label) {
    if (is_zero(e)) return Verdict::pass();
    return Verdict::fail(label + " = " + render(e));
}

std::vector<Expr> conservative(const std::vector<std::string>& fluxes, const Context& ctx) {
    std::vector<Expr> out;
    for (const auto& f : fluxes) out.push_back(total_x_derivative(ctx.parse(f), ctx));
    return out;
}

Substitution chazy_solution(const Context& ctx) {
    Substitution s;
    const Var w = ctx.field_var(2);
    s.functions["gamma"] = {w, Expr(-2) / Expr::symbol(w)};
    return s;
}

void wdvv_identity_checks(Runner& run) {
    const Context ctx = wdvv_context();
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    const Var w = ctx.field_var(2);
    const Substitution special = chazy_solution(ctx);
    const Expr ansatz = wdvv_ansatz(ctx);
    const Expr reduced = substitute(ansatz, special);

    run.check("wdvv.chazy", [&] { return zero_verdict(chazy_residual(Expr(-2) / Expr::symbol(w), w), "chazy residual"); });
    run.check("wdvv.residual", [&] {
        const Expr gamma = Expr::function("gamma", 0, Expr::symbol(w));
        const Expr v = ctx.field(1);
        return zero_verdict(wdvv_residual(ansatz, ctx) + v.pow(4) / 16 * chazy_residual(gamma, w),
                            "residual + v^4/16 chazy");
    });
    run.check("wdvv.generic_flows", [&] {
        const auto t = conservative({"-v^3*gamma'(w)/4", "u - 3*v^2*gamma(w)/4", "v"}, ctx);
        const auto y = conservative({"-v^4*gamma''(w)/16", "-v^3*gamma'(w)/4", "u"}, ctx);
        Verdict v = flow_equal(wdvv_flow(ansatz, eta, 2, ctx), flow_from_rhs(t, ctx), ctx);
        if (!v) return Verdict::fail("k = 2: " + v.witness);
        v = flow_equal(wdvv_flow(ansatz, eta, 3, ctx), flow_from_rhs(y, ctx), ctx);
        if (!v) return Verdict::fail("k = 3: " + v.witness);
        return Verdict::pass();
    });
    run.check("wdvv.reduced_flows", [&] {
        Verdict v = flow_equal(wdvv_flow(reduced, eta, 2, ctx), flow_from_rhs(reduced_flow_t(ctx), ctx), ctx);
        if (!v) return Verdict::fail("k = 2: " + v.witness);
        v = flow_equal(wdvv_flow(reduced, eta, 3, ctx), flow_from_rhs(reduced_flow_y(ctx), ctx), ctx);
        if (!v) return Verdict::fail("k = 3: " + v.witness);
        return Verdict::pass();
    });
    run.check("wdvv.commute", [&] {
        return commute_check(flow_from_rhs(reduced_flow_t(ctx), ctx), flow_from_rhs(reduced_flow_y(ctx), ctx), ctx);
    });
    run.check("wdvv.elimination", [&] {
        return zero_verdict(elimination_residual(isometry_extended_system(ctx), ctx), "elimination residual");
    });
}

}  // namespace

VerificationReport verify_case(const CaseRecord& record, const VerifyOptions& options) {
    const auto start = Clock::now();
    VerificationReport out;
    out.name = record.name;
    const LoadedCase lc = load_case(record);
    Runner run(out.report, record, options);

    run.check("nondegenerate", [&] {
        const Expr det = lc.metric.determinant();
        if (is_zero(det)) throw DegenerateMetricError("degenerate metric: det g = 0");
        std::string note = "det g = " + render(det);
        if (det.is_constant()) {
            note += ", constant";
        } else if (lc.ctx.nonzero_by_assumption(det)) {
            note += ", nonzero by assumption";
        }
        return Verdict{true, note};
    });
    if (out.report.checks.back().status != Status::pass) {
        out.seconds = seconds_since(start);
        return out;
    }
    const NonlocalIsometryOp op = lc.op();

    run.group("nonlocal", [&] { return validate_nonlocal(op, options.fail_fast); });
    run.group("pair", [&] { return pair_check(lc.eta, op); });

    const References& refs = record.references;
    if (!refs.christoffel.empty())
        run.check("ref.christoffel", [&] { return christoffel_reference(lc, op, refs.christoffel); });
    if (!refs.liouville.empty())
        run.check("ref.liouville", [&] {
            return liouville_gauge_equal(liouville_potential(op), parse_matrix(lc, refs.liouville), lc.metric.coords());
        });
    if (!refs.h_potentials.empty())
        run.check("ref.h_potentials", [&] {
            std::vector<Expr> h;
            for (const auto& s : refs.h_potentials) h.push_back(lc.parse(s));
            return h_potential_check(op, lc.eta, h);
        });
    if (refs.recursion) {
        const RecursionReference& ref = *refs.recursion;
        if (ref.matrix.empty()) {
            std::string note = ref.note.empty() ? "no printed reference" : ref.note;
            run.check("ref.recursion.computed", [&] {
                const LoadedCase special = load_specialized(record, ref.substitute);
                const RecursionOperator r = recursion_operator(special.eta, special.op(), special.ctx);
                return Verdict{true, std::to_string(r.dim()) + "x" + std::to_string(r.dim()) + " operator"};
            });
            run.skipped("ref.recursion", note);
        } else {
            run.check("ref.recursion", [&] { return recursion_reference(record, ref); });
        }
    }
    for (const auto& flow : refs.flows)
        run.check("ref.flow." + flow.name, [&] { return flow_reference(record, flow); });
    if (refs.degenerate_split)
        run.check("ref.degenerate_split", [&] {
            Verdict v = degenerate_split(lc.metric, lc.eta);
            if (v.holds == *refs.degenerate_split)
                return Verdict{true, v.holds ? "det(g - eta) = 0" : v.witness};
            return Verdict::fail(v.holds ? "det(g - eta) = 0 unexpectedly" : v.witness);
        });
    if (refs.wdvv_identities) wdvv_identity_checks(run);

    out.seconds = seconds_since(start);
    return out;
}

std::vector<VerificationReport> verify_all(const std::vector<CaseRecord>& records, const VerifyOptions& options,
                                           unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<VerificationReport> out(records.size());
    std::vector<std::exception_ptr> errors(records.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            try {
                out[i] = verify_case(records[i], options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(records.size()));
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!errors[i]) continue;
        out[i].name = records[i].name;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            out[i].report.add_error("load", e.what());
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const VerificationReport& a, const VerificationReport& b) { return a.name < b.name; });
    return out;
}

// ---------------------------------------------------------------- three-component WDVV identities

Context wdvv_context() {
    Context ctx({"u", "v", "w"}, {"x", "t"});
    ctx.add_function("gamma");
    return ctx;
}

Expr wdvv_ansatz(const Context& ctx) { return ctx.parse("u^2*w/2 + u*v^2/2 - v^4*gamma(w)/16"); }

Expr wdvv_residual(const Expr& f, const Context& ctx) {
    const Expr u = ctx.field(0);
    const Expr v = ctx.field(1);
    const Expr w = ctx.field(2);
    const Expr rest = f - u * u * w / 2 - u * v * v / 2;
    if (depends_on(rest, ctx.field_var(0)))
        throw ShapeError("potential is not u^2 w/2 + u v^2/2 + f(v, w): " + render(f));
    auto d = [&](const Expr& e, std::initializer_list<Expr> by) {
        Expr out = e;
        for (const auto& s : by) out = diff(out, s);
        return out;
    };
    const Expr fvvw = d(rest, {v, v, w});
    return d(rest, {w, w, w}) - fvvw * fvvw + d(rest, {v, w, w}) * d(rest, {v, v, v});
}

Expr chazy_residual(const Expr& gamma, Var w) {
    const Expr g1 = diff(gamma, w);
    const Expr g2 = diff(g1, w);
    const Expr g3 = diff(g2, w);
    return g3 - 6 * gamma * g2 + 9 * g1 * g1;
}

std::vector<Expr> isometry_extended_system(const Context& ctx) {
    return {
        ctx.parse("-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x - x"),
        ctx.parse("u_x + 3*v/w*v_x - 3*v^2/(2*w^2)*w_x"),
        ctx.parse("v_x"),
    };
}

std::vector<Expr> reduced_flow_t(const Context& ctx) {
    return conservative({"-v^3/(2*w^2)", "u + 3*v^2/(2*w)", "v"}, ctx);
}

std::vector<Expr> reduced_flow_y(const Context& ctx) {
    return conservative({"v^4/(4*w^3)", "-v^3/(2*w^2)", "u"}, ctx);
}

Expr elimination_residual(const std::vector<Expr>& system, const Context& ctx) {
    if (system.size() != 3 || ctx.dimension() != 3) throw ShapeError("elimination needs a three-component system");
    const Expr u_x = ctx.jet(0, "x");
    const Expr v_t = ctx.jet(1, "t");
    if (!is_zero(system[2] - ctx.jet(1, "x"))) throw ShapeError("third equation must be w_t = v_x");

    const Expr a = diff(system[1], u_x);
    if (is_zero(a)) throw ShapeError("second equation does not contain u_x");
    const Expr ux = (v_t - (system[1] - a * u_x)) / a;
    Substitution eliminate;
    eliminate.symbols[as_symbol(u_x)] = ux;
    const Expr ut = substitute(system[0], eliminate);
    for (const Expr* e : {&ux, &ut})
        for (Var s : free_symbols(*e)) {
            auto jet = ctx.jet_of(s);
            if (jet && jet->field == 0) throw ShapeError("u cannot be eliminated: " + render(*e));
        }

    Context z({"z"}, {"x", "t"});
    Substitution potential;
    potential.symbols[ctx.field_var(1)] = z.jet(0, "t");
    potential.symbols[ctx.field_var(2)] = z.jet(0, "x");
    potential.symbols[as_symbol(ctx.jet(1, "x"))] = z.parse("z_xt");
    potential.symbols[as_symbol(ctx.jet(1, "t"))] = z.parse("z_tt");
    potential.symbols[as_symbol(ctx.jet(2, "x"))] = z.parse("z_xx");
    potential.symbols[as_symbol(ctx.jet(2, "t"))] = z.parse("z_xt");
    const Expr zux = substitute(ux, potential);
    const Expr zut = substitute(ut, potential);
    const Expr cross = total_derivative(zux, z, "t") - total_derivative(zut, z, "x");

    auto dd = [&](const Expr& e, std::string_view a1, std::string_view a2) {
        return total_derivative(total_derivative(e, z, a1), z, a2);
    };
    const Expr rhs = dd(z.parse("3*z_t^2/(2*z_x)"), "x", "t") - dd(z.parse("z_t^3/(2*z_x^2)"), "x", "x") - 1;
    return cross - (z.parse("z_ttt") - rhs);
}

bool elimination_check() {
    const Context ctx = wdvv_context();
    return is_zero(elimination_residual(isometry_extended_system(ctx), ctx));
}

Verdict degenerate_split(const Metric& g, const ConstantOp& eta) {
    if (g.dim() != eta.dim()) throw ShapeError("degenerate_split: dimension mismatch");
    const Expr det = determinant(add(g.entries(), scale(eta.eta, -1)));
    if (is_zero(det)) return Verdict::pass();
    return Verdict::fail("det(g - eta) = " + render(det));
}

}  // namespace pencil_forge
