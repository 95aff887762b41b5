#include "pencil_forge/calculus.hpp"
#include "pencil_forge/catalog.hpp"
#include "pencil_forge/errors.hpp"
#include "pencil_forge/hierarchy.hpp"
#include "support.hpp"

using namespace pencil_forge;
using namespace pencil_forge::testing;

namespace {

Context astigmatism_ctx() {
    Context c({"u", "v"});
    c.add_parameter("alpha").add_parameter("beta").add_parameter("eps");
    return c;
}

NonlocalIsometryOp astigmatism(const Context& c) {
    return make_nonlocal(metric(c, {{"u", "beta"}, {"beta", "alpha/u"}}), Expr(0), c.parse("eps"), field(c, {"0", "1"}));
}

NonlocalIsometryOp wdvv(const Context& c) {
    return make_nonlocal(metric(c, {{"v^3/w^2", "-3*v^2/(2*w)", "-v + 1"},
                                    {"-3*v^2/(2*w)", "2*v + 1", "w"},
                                    {"-v + 1", "w", "0"}}),
                         Expr(0), Expr(1), field(c, {"1", "0", "0"}));
}

QuasilinearFlow flow(const Context& c, const std::vector<std::string>& rhs) {
    std::vector<Expr> e;
    for (const auto& s : rhs) e.push_back(c.parse(s));
    return flow_from_rhs(e, c);
}

const std::vector<std::string> sourced_system = {
    "-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x - x",
    "u_x + 3*v/w*v_x - 3*v^2/(2*w^2)*w_x",
    "v_x",
};

// expanded from u_t = (-v^3/(2w^2))_x, v_t = (u + 3v^2/(2w))_x, w_t = v_x
const std::vector<std::string> t_flow = {
    "-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x",
    "u_x + 3*v/w*v_x - 3*v^2/(2*w^2)*w_x",
    "v_x",
};

// expanded from u_y = (v^4/(4w^3))_x, v_y = (-v^3/(2w^2))_x, w_y = u_x
const std::vector<std::string> y_flow = {
    "v^3/w^3*v_x - 3*v^4/(4*w^4)*w_x",
    "-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x",
    "u_x",
};

::testing::AssertionResult flows_equal(const QuasilinearFlow& a, const QuasilinearFlow& b, const Context& c) {
    return holds(flow_equal(a, b, c));
}

Context wdvv_ctx() {
    Context c({"u", "v", "w"});
    c.add_function("gamma");
    return c;
}

Expr chazy_ansatz_f(const Context& c) { return c.parse("u^2*w/2 + u*v^2/2 + v^4/(8*w)"); }

}  // namespace

TEST(VariationalGradient, Examples) {
    const Context c = astigmatism_ctx();
    const Covector a = variational_gradient(c.parse("-2*v"), c);
    EXPECT_TRUE(zero(a[0]));
    EXPECT_TRUE(same(a[1], Expr(-2)));

    const Context w = ctx3();
    const Covector b = variational_gradient(w.parse("u*v + v^3/(2*w) - x^2*w/2"), w);
    EXPECT_TRUE(same(b[0], w.parse("v")));
    EXPECT_TRUE(same(b[1], w.parse("u + 3*v^2/(2*w)")));
    EXPECT_TRUE(same(b[2], w.parse("-v^3/(2*w^2) - x^2/2")));

    for (const auto& e : variational_gradient(Expr(0), w)) EXPECT_TRUE(zero(e));
}

TEST(VariationalGradient, RejectsJets) {
    const Context c = ctx2();
    EXPECT_THROW(require_jet_free(c.parse("u*u_x"), c), ShapeError);
}

TEST(ApplyOperator, AstigmatismCasimir) {
    const Context c = astigmatism_ctx();
    const QuasilinearFlow f = apply_operator(astigmatism(c), {Expr(0), Expr(-2)}, c);
    EXPECT_TRUE(flows_equal(f, flow(c, {"v_x", "alpha/u^2*u_x - 2*eps*x"}), c));
}

TEST(ApplyOperator, WdvvCasimirIsNegatedSystem) {
    const Context c = ctx3();
    const QuasilinearFlow f = apply_operator(wdvv(c), {Expr(1), Expr(0), Expr(0)}, c);
    std::vector<std::string> negated;
    for (const auto& s : sourced_system) negated.push_back("-(" + s + ")");
    EXPECT_TRUE(flows_equal(f, flow(c, negated), c));
    EXPECT_FALSE(flow_equal(f, flow(c, sourced_system), c).holds);
    const Verdict v = flow_equal_up_to_sign(f, flow(c, sourced_system), c);
    EXPECT_TRUE(v.holds);
    EXPECT_FALSE(v.witness.empty());
}

TEST(ApplyOperator, ZeroCovector) {
    const Context c = astigmatism_ctx();
    const QuasilinearFlow f = apply_operator(astigmatism(c), {Expr(0), Expr(0)}, c);
    for (const auto& e : f.rhs(c)) EXPECT_TRUE(zero(e));
}

TEST(ApplyOperator, FieldDependentKernel) {
    const Context c = astigmatism_ctx();
    EXPECT_THROW(apply_operator(astigmatism(c), {Expr(0), c.parse("u")}, c), NonlocalUnresolvedError);
}

TEST(FlowFromDensity, Examples) {
    const Context w = ctx3();
    EXPECT_TRUE(flows_equal(flow_from_density(ConstantOp::antidiagonal(3), w.parse("u*v + v^3/(2*w) - x^2*w/2"), w),
                            flow(w, sourced_system), w));

    const Context c = ctx2();
    // u_t = v_x, v_t = -(1/u)_x - 2x
    EXPECT_TRUE(flows_equal(flow_from_density(ConstantOp::antidiagonal(2), c.parse("v^2/2 - ln(u) - x^2*u"), c),
                            flow(c, {"v_x", "u_x/u^2 - 2*x"}), c));

    for (const auto& e : flow_from_density(ConstantOp::antidiagonal(2), c.parse("3*u - 5/2"), c).rhs(c))
        EXPECT_TRUE(zero(e));
}

TEST(MagriStep, Astigmatism) {
    Context c = astigmatism_ctx();
    Substitution s;
    s.symbols[SymbolTable::instance().plain("alpha")] = Expr(1);
    s.symbols[SymbolTable::instance().plain("eps")] = Expr(1);
    NonlocalIsometryOp b = astigmatism(c);
    b = make_nonlocal(Metric({{substitute(b.g(0, 0), s), substitute(b.g(0, 1), s)},
                              {substitute(b.g(1, 0), s), substitute(b.g(1, 1), s)}},
                             b.g.coords()),
                      Expr(0), Expr(1), b.f);
    const Expr h1 = magri_step(ConstantOp::antidiagonal(2), b, c.parse("-2*v"), c);
    EXPECT_TRUE(same(h1, c.parse("v^2/2 - ln(u) - x^2*u")));
}

TEST(MagriStep, WdvvRegeneratesSourcedSystem) {
    const Context c = ctx3();
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    const Expr h1 = magri_step(eta, wdvv(c), c.parse("-u"), c);
    EXPECT_TRUE(flows_equal(flow_from_density(eta, h1, c), flow(c, sourced_system), c));
    // agrees with the printed density up to Casimirs (linear in the fields)
    const Expr d = h1 - c.parse("u*v + v^3/(2*w) - x^2*w/2");
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(zero(diff(diff(d, c.field_var(i)), c.field_var(j))));
}

TEST(MagriStep, ZeroDensity) {
    const Context c = astigmatism_ctx();
    EXPECT_TRUE(zero(magri_step(ConstantOp::antidiagonal(2), astigmatism(c), Expr(0), c)));
}

TEST(MagriStep, Obstructions) {
    const Context c = astigmatism_ctx();
    EXPECT_THROW(magri_step(ConstantOp::antidiagonal(2), astigmatism(c), c.parse("u^2"), c), NotExactError);
    EXPECT_THROW(magri_step(ConstantOp::antidiagonal(2), astigmatism(c), c.parse("u*v"), c), NonlocalUnresolvedError);

    const Context p = ctx2();
    const NonlocalIsometryOp identity =
        make_nonlocal(metric(p, {{"1", "0"}, {"0", "1"}}), Expr(0), Expr(0), field(p, {"0", "0"}));
    EXPECT_THROW(magri_step(ConstantOp::antidiagonal(2), identity, p.parse("u^2/2"), p), NotClosedError);
}

TEST(RecursionOperator, G6) {
    const LoadedCase lc = load_case(*find_builtin("g6"));
    const RecursionOperator r = recursion_operator(lc.eta, lc.op(), lc.ctx);
    const char* expected[2][2] = {{"beta*dx + dx^-1", "alpha*dx + dx^-1"}, {"gamma*dx + dx^-1", "beta*dx + dx^-1"}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(render(r.entries[i][k]), expected[i][k]);
}

TEST(RecursionOperator, G3) {
    const LoadedCase lc = load_case(*find_builtin("g3"));
    const RecursionOperator r = recursion_operator(lc.eta, lc.op(), lc.ctx);
    const Context& c = lc.ctx;
    RecursionOperator printed;
    printed.entries = {
        {{c.parse("beta"), c.parse("u_x/2"), {}}, {Expr(0), Expr(0), {{Expr(1), Expr(1)}}}},
        {{c.parse("v"), c.parse("v_x/2"), {}}, {c.parse("beta"), c.parse("-u_x/2"), {}}},
    };
    EXPECT_TRUE(holds(recursion_equal(r, printed, c)));
}

TEST(RecursionOperator, AstigmatismFinalDisplay) {
    CaseRecord record = *find_builtin("astigmatism");
    record.bindings = {{"alpha", "1"}, {"beta", "0"}, {"eps", "1"}};
    const LoadedCase lc = load_case(record);
    const Context& c = lc.ctx;
    RecursionOperator printed;
    printed.entries = {
        {{Expr(0), c.parse("-v_x/2"), {}}, {c.parse("u"), c.parse("u_x/2"), {}}},
        {{c.parse("1/u"), c.parse("-u_x/(2*u^2)"), {{Expr(1), Expr(1)}}}, {Expr(0), c.parse("v_x/2"), {}}},
    };
    EXPECT_TRUE(holds(recursion_equal(recursion_operator(lc.eta, lc.op(), c), printed, c)));
}

TEST(RecursionOperator, SymbolEqualityComparesNonlocalBilinearForms) {
    const Context c = ctx2();
    const OperatorSymbol a{Expr(0), Expr(0), {{c.parse("u"), c.parse("v")}, {c.parse("u"), c.parse("u")}}};
    const OperatorSymbol b{Expr(0), Expr(0), {{c.parse("u"), c.parse("u + v")}}};
    const OperatorSymbol d{Expr(0), Expr(0), {{c.parse("v"), c.parse("u")}}};
    EXPECT_TRUE(holds(symbol_equal(a, b, c)));
    EXPECT_FALSE(symbol_equal(a, d, c).holds);
}

TEST(CommuteCheck, Examples) {
    const Context c = ctx3();
    EXPECT_TRUE(holds(commute_check(flow(c, t_flow), flow(c, y_flow), c)));
    EXPECT_TRUE(holds(commute_check(flow(c, t_flow), flow(c, t_flow), c)));
    std::vector<std::string> altered = t_flow;
    altered[2] = "u_x";
    EXPECT_FALSE(commute_check(flow(c, t_flow), flow(c, altered), c).holds);
}

TEST(WdvvFlow, ReducedFlows) {
    const Context c = ctx3();
    const Expr f = chazy_ansatz_f(c);  // gamma = -2/w
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    EXPECT_TRUE(flows_equal(wdvv_flow(f, eta, 2, c), flow(c, t_flow), c));
    EXPECT_TRUE(flows_equal(wdvv_flow(f, eta, 3, c), flow(c, y_flow), c));
    EXPECT_TRUE(flows_equal(wdvv_flow(f, eta, 1, c), flow(c, {"u_x", "v_x", "w_x"}), c));
}

TEST(WdvvFlow, GenericGammaFlows) {
    const Context c = wdvv_ctx();
    const Expr f = c.parse("u^2*w/2 + u*v^2/2 - v^4*gamma(w)/16");
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    const QuasilinearFlow t = wdvv_flow(f, eta, 2, c);
    std::vector<Expr> expected = {
        total_x_derivative(c.parse("-v^3*gamma'(w)/4"), c),
        total_x_derivative(c.parse("u - 3*v^2*gamma(w)/4"), c),
        c.parse("v_x"),
    };
    EXPECT_TRUE(flows_equal(t, flow_from_rhs(expected, c), c));
}

// ---------------------------------------------------------------- properties

TEST(Property, MagriIdentity) {
    struct Item {
        const char* name;
        const char* density;
    };
    for (const Item& item : {Item{"g1", "u"}, Item{"g1", "v"}, Item{"g3", "u"}, Item{"g6", "x*u"},
                             Item{"astigmatism", "-2*v"}, Item{"astigmatism", "u"}, Item{"wdvv3", "-u"}}) {
        SCOPED_TRACE(std::string(item.name) + " " + item.density);
        const LoadedCase lc = load_case(*find_builtin(item.name));
        const NonlocalIsometryOp b = lc.op();
        const Expr h = lc.parse(item.density);
        const Expr next = magri_step(lc.eta, b, h, lc.ctx);
        EXPECT_TRUE(flows_equal(flow_from_density(lc.eta, next, lc.ctx),
                                apply_operator(b, variational_gradient(h, lc.ctx), lc.ctx), lc.ctx));
    }
}

TEST(Property, RecursionColumnsArePermutedOperatorColumns) {
    for (const auto& record : builtin_cases()) {
        if (record.n != 2) continue;
        SCOPED_TRACE(record.name);
        const LoadedCase lc = load_case(record);
        const NonlocalIsometryOp b = lc.op();
        const RecursionOperator r = recursion_operator(lc.eta, b, lc.ctx);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k)
                EXPECT_TRUE(holds(symbol_equal(r.entries[i][k], operator_entry(b, i, 1 - k, lc.ctx), lc.ctx)));
    }
}

TEST(Property, CommuteCheckIsSymmetric) {
    const Context c = ctx3();
    const std::vector<std::vector<std::string>> systems = {t_flow, y_flow, sourced_system,
                                                           {"u_x", "v_x", "w_x"}, {"v_x", "w_x", "u_x"}};
    for (const auto& a : systems)
        for (const auto& b : systems)
            EXPECT_EQ(commute_check(flow(c, a), flow(c, b), c).holds, commute_check(flow(c, b), flow(c, a), c).holds);
}

TEST(Property, WdvvFlowsCommuteOnChazySolution) {
    const Context c = ctx3();
    const Expr f = chazy_ansatz_f(c);
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    for (std::size_t k = 1; k <= 3; ++k)
        for (std::size_t m = k + 1; m <= 3; ++m)
            EXPECT_TRUE(holds(commute_check(wdvv_flow(f, eta, k, c), wdvv_flow(f, eta, m, c), c))) << k << m;
}

TEST(Property, WdvvFlowsFailToCommuteOffSolution) {
    const Context c = ctx3();
    const Expr f = c.parse("u^2*w/2 + u*v^2/2 - v^4*w/16");  // gamma = w is not a Chazy solution
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    EXPECT_FALSE(commute_check(wdvv_flow(f, eta, 2, c), wdvv_flow(f, eta, 3, c), c).holds);
}
