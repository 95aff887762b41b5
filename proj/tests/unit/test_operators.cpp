#include "pencil_forge/catalog.hpp"
#include "pencil_forge/errors.hpp"
#include "pencil_forge/operators.hpp"
#include "support.hpp"

using namespace pencil_forge;
using namespace pencil_forge::testing;

namespace {

NonlocalIsometryOp astigmatism(const Context& c, const std::vector<std::string>& f = {"0", "1"}) {
    return make_nonlocal(metric(c, {{"u", "beta"}, {"beta", "alpha/u"}}), Expr(0), Expr(1), field(c, f));
}

NonlocalIsometryOp wdvv(const Context& c) {
    return make_nonlocal(metric(c, {{"v^3/w^2", "-3*v^2/(2*w)", "-v + 1"},
                                    {"-3*v^2/(2*w)", "2*v + 1", "w"},
                                    {"-v + 1", "w", "0"}}),
                         Expr(0), Expr(1), field(c, {"1", "0", "0"}));
}

Matrix text_matrix(const Context& c, const std::vector<std::vector<std::string>>& text) {
    Matrix m;
    for (const auto& row : text) {
        std::vector<Expr> r;
        for (const auto& s : row) r.push_back(c.parse(s));
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

TEST(ValidateLocal, Examples) {
    Context c = ctx2();
    const Metric g = metric(c, {{"u", "0"}, {"0", "1/u"}});
    EXPECT_TRUE(validate_local({g, levi_civita(g).contravariant}).valid());

    const Metric eta = ConstantOp::antidiagonal(2).metric(coords(c));
    EXPECT_TRUE(validate_local({eta, Tensor3(2)}).valid());

    const Report bad = validate_local({metric(c, {{"u", "0"}, {"0", "1"}}), Tensor3(2)});
    EXPECT_FALSE(bad.valid());
    EXPECT_EQ(bad.first_failure()->name, "levi_civita");
}

TEST(ValidateNonlocal, Examples) {
    const Context c = ctx2({"alpha", "beta"});
    EXPECT_TRUE(validate_nonlocal(astigmatism(c)).valid());
    EXPECT_TRUE(validate_nonlocal(wdvv(ctx3())).valid());

    const Report bad = validate_nonlocal(astigmatism(c, {"1", "1"}));
    EXPECT_FALSE(bad.valid());
    ASSERT_NE(bad.find("killing"), nullptr);
    EXPECT_EQ(bad.find("killing")->status, Status::fail);
    EXPECT_EQ(bad.find("symmetric")->status, Status::pass);
}

TEST(ValidateNonlocal, NonzeroCurvatureConstant) {
    const Context c = ctx2({"k"});
    const std::string conf = "(1 + k/4*(u^2 + v^2))^2";
    const Metric g = metric(c, {{conf, "0"}, {"0", conf}});
    NonlocalIsometryOp op = make_nonlocal(g, c.parse("k"), Expr(0), field(c, {"0", "0"}));
    const Report r = validate_nonlocal(op);
    EXPECT_TRUE(r.valid());
    EXPECT_EQ(r.find("local_part"), nullptr);
    op.c = Expr(0);
    EXPECT_EQ(validate_nonlocal(op).find("constant_curvature")->status, Status::fail);
}

TEST(ValidateNonlocal, FailFastStopsAfterFirstFailingStage) {
    const Context c = ctx2({"alpha", "beta"});
    const Report r = validate_nonlocal(astigmatism(c, {"1", "1"}), true);
    EXPECT_FALSE(r.valid());
    EXPECT_EQ(r.find("constant_curvature"), nullptr);
}

TEST(ValidateNonlocal, EpsilonZeroStaysValid) {
    const Context c = ctx2({"alpha", "beta"});
    NonlocalIsometryOp op = astigmatism(c);
    op.epsilon = Expr(0);
    EXPECT_TRUE(validate_nonlocal(op).valid());
}

TEST(Liouville, Wdvv) {
    const Context c = ctx3();
    const NonlocalIsometryOp op = wdvv(c);
    const Matrix printed = text_matrix(c, {{"v^3/(2*w^2)", "u", "1"},
                                           {"-3*v^2/(2*w) - u", "(2*v + 1)/2", "0"},
                                           {"-v", "w", "0"}});
    EXPECT_TRUE(holds(liouville_gauge_equal(liouville_potential(op), printed, coords(c))));
}

TEST(Liouville, Astigmatism) {
    const Context c = ctx2({"alpha", "beta"});
    const Matrix expected = text_matrix(c, {{"u/2", "-v/2 + beta"}, {"v/2", "alpha/(2*u)"}});
    const Matrix r = liouville_potential(astigmatism(c));
    EXPECT_TRUE(holds(liouville_gauge_equal(r, expected, coords(c))));
    // the gauge is only a constant antisymmetric shift
    const Matrix off = text_matrix(c, {{"u/2", "-v/2 + beta + u"}, {"v/2", "alpha/(2*u)"}});
    EXPECT_FALSE(liouville_gauge_equal(r, off, coords(c)).holds);
}

TEST(Liouville, ConstantMetricGivesHalf) {
    const Context c = ctx2();
    const Metric g = metric(c, {{"2", "3"}, {"3", "-1"}});
    const Matrix r = liouville_potential(make_nonlocal(g, Expr(0), Expr(1), field(c, {"1", "0"})));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_TRUE(same(r[i][j], g(i, j) / Expr(2)));
}

TEST(Liouville, InconsistentMixedPartials) {
    const Context c = ctx2();
    NonlocalIsometryOp op = make_nonlocal(metric(c, {{"1", "0"}, {"0", "1"}}), Expr(0), Expr(1), field(c, {"0", "0"}));
    op.gamma(0, 0, 0) = c.parse("v");
    EXPECT_THROW(liouville_potential(op), NotLiouvilleError);
}

TEST(HPotential, Wdvv) {
    const Context c = ctx3();
    const NonlocalIsometryOp op = wdvv(c);
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    EXPECT_TRUE(holds(h_potential_check(op, eta, field(c, {"-u*v - v^3/(2*w)", "u*w + v^2/2 + v/2", "w"}))));
    EXPECT_FALSE(h_potential_check(op, eta, field(c, {"-u*v - v^3/(2*w)", "u*w + v^2/2 + v/2", "2*w"})).holds);
}

TEST(HPotential, ConstantOperatorGauges) {
    const Context c = ctx2();
    const ConstantOp eta = ConstantOp::antidiagonal(2);
    const Metric g = eta.metric(coords(c));
    const NonlocalIsometryOp op = make_nonlocal(g, Expr(0), Expr(1), field(c, {"0", "0"}));
    const std::vector<Var> x = coords(c);
    // expansion oracle for the leading identity
    auto leading_holds = [&](const VectorField& h) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Expr lead;
                for (std::size_t s = 0; s < 2; ++s)
                    lead += eta.eta[i][s] * diff(h[j], x[s]) + eta.eta[j][s] * diff(h[i], x[s]);
                if (!(g(i, j) - lead).is_zero()) return false;
            }
        return true;
    };
    const VectorField lowered = field(c, {"v/2", "u/2"});  // sum_j eta_ij u^j / 2
    EXPECT_EQ(h_potential_check(op, eta, lowered).holds, leading_holds(lowered));
    EXPECT_FALSE(leading_holds(lowered));
    const VectorField plain = field(c, {"u/2", "v/2"});
    EXPECT_EQ(h_potential_check(op, eta, plain).holds, leading_holds(plain));
    EXPECT_TRUE(leading_holds(plain));
}

TEST(HPotential, WrongLengthIsShapeError) {
    const Context c = ctx3();
    EXPECT_THROW(h_potential_check(wdvv(c), ConstantOp::antidiagonal(3), field(c, {"u", "v"})), ShapeError);
}

TEST(Property, LocalPartsOfCatalogCasesAreValid) {
    for (const auto& record : builtin_cases()) {
        SCOPED_TRACE(record.name);
        const NonlocalIsometryOp op = load_case(record).op();
        EXPECT_TRUE(validate_local(op.local_part()).valid());
    }
}

TEST(Property, LiouvillePotentialRecoversMetricAndSymbols) {
    for (const auto& record : builtin_cases()) {
        SCOPED_TRACE(record.name);
        const NonlocalIsometryOp op = load_case(record).op();
        Matrix r;
        try {
            r = liouville_potential(op);
        } catch (const NotLiouvilleError&) {
            continue;
        } catch (const NotIntegrableError&) {
            continue;
        }
        const std::size_t n = op.dim();
        const auto& x = op.g.coords();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_TRUE(same(r[i][j] + r[j][i], op.g(i, j)));
                for (std::size_t k = 0; k < n; ++k) EXPECT_TRUE(same(diff(r[i][j], x[k]), op.gamma(i, j, k)));
            }
    }
}
