#include "pencil_forge/catalog.hpp"
#include "pencil_forge/errors.hpp"
#include "pencil_forge/pencil.hpp"
#include "support.hpp"

using namespace pencil_forge;
using namespace pencil_forge::testing;

namespace {

Metric eta2(const Context& c) { return ConstantOp::antidiagonal(2).metric(coords(c)); }

Metric metric_at(const Metric& g, const Metric& h, long lambda) {
    Matrix m = g.entries();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) m[i][j] += Expr(lambda) * h(i, j);
    return Metric(m, g.coords());
}

/// Affinity of lambda -> Gamma(g + lambda h), probed at lambda = 1, 2, 3 with
/// separately constructed numeric metrics.
bool affine_by_sampling(const Metric& g, const Metric& h) {
    const Tensor3 a = levi_civita(metric_at(g, h, 1)).contravariant;
    const Tensor3 b = levi_civita(metric_at(g, h, 2)).contravariant;
    const Tensor3 c = levi_civita(metric_at(g, h, 3)).contravariant;
    const std::size_t n = g.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (!(c(i, j, k) - b(i, j, k) * Expr(2) + a(i, j, k)).is_zero()) return false;
    return true;
}

}  // namespace

TEST(AlmostCompatible, Examples) {
    const Context c = ctx2({"alpha", "beta", "gamma"});
    EXPECT_TRUE(holds(almost_compatible(eta2(c), metric(c, {{"alpha", "beta"}, {"beta", "gamma"}}))));
    EXPECT_TRUE(holds(almost_compatible(eta2(c), metric(c, {{"alpha/v", "beta"}, {"beta", "v"}}))));
    const Metric bad = metric(c, {{"u", "0"}, {"0", "1"}});
    EXPECT_FALSE(affine_by_sampling(eta2(c), bad));
    EXPECT_FALSE(almost_compatible(eta2(c), bad).holds);
}

TEST(AlmostCompatible, DegeneratePencil) {
    const Context c = ctx2();
    const Metric g = metric(c, {{"1", "1"}, {"1", "1"}});
    EXPECT_THROW(almost_compatible(g, g), DegenerateMetricError);
}

TEST(Compatible, Examples) {
    const Context c = ctx2({"k"});
    EXPECT_TRUE(holds(compatible(eta2(c), eta2(c))));
    const std::string conf = "(1 + k/4*(u^2 + v^2))^2";
    EXPECT_FALSE(compatible(eta2(c), metric(c, {{conf, "0"}, {"0", conf}})).holds);
}

TEST(Compatible, EtaWithEveryClassifiedMetric) {
    for (const auto& record : builtin_cases()) {
        if (record.n != 2) continue;
        SCOPED_TRACE(record.name);
        const LoadedCase lc = load_case(record);
        EXPECT_TRUE(holds(compatible(lc.eta.metric(lc.metric.coords()), lc.metric)));
    }
}

TEST(Pencil, RejectsLambdaInInputs) {
    const Context c = ctx2();
    Matrix m = eta2(c).entries();
    m[0][0] = Expr::symbol(Pencil::lambda());
    EXPECT_THROW(Pencil(Metric(m, coords(c)), eta2(c)), Error);
}

TEST(PairCheck, Examples) {
    const Context c = ctx2({"alpha", "beta"});
    const Metric g = metric(c, {{"u", "beta"}, {"beta", "alpha/u"}});
    const ConstantOp a = ConstantOp::antidiagonal(2);
    EXPECT_TRUE(pair_check(a, make_nonlocal(g, Expr(0), Expr(1), field(c, {"0", "1"}))).valid());

    const Report bad = pair_check(a, make_nonlocal(g, Expr(0), Expr(1), field(c, {"1", "0"})));
    EXPECT_FALSE(bad.valid());
    EXPECT_EQ(bad.find("killing_eta")->status, Status::pass);
    EXPECT_EQ(bad.find("killing_g")->status, Status::fail);

    const Context c3 = ctx3();
    const Metric w = metric(c3, {{"v^3/w^2", "-3*v^2/(2*w)", "-v + 1"},
                                 {"-3*v^2/(2*w)", "2*v + 1", "w"},
                                 {"-v + 1", "w", "0"}});
    EXPECT_TRUE(pair_check(ConstantOp::antidiagonal(3), make_nonlocal(w, Expr(0), Expr(1), field(c3, {"1", "0", "0"})))
                    .valid());
}

TEST(PairCheck, NonflatCompanion) {
    const Context c = ctx2();
    const Report r =
        pair_check(ConstantOp::antidiagonal(2), make_nonlocal(metric(c, {{"u", "0"}, {"0", "1"}}), Expr(0), Expr(1),
                                                             field(c, {"0", "1"})));
    EXPECT_FALSE(r.valid());
    EXPECT_EQ(r.find("compatible")->status, Status::fail);
}

// ---------------------------------------------------------------- properties

TEST(Property, ValidPairGivesHamiltonianPencil) {
    for (const char* name : {"astigmatism", "g1", "g3", "g5", "g8"}) {
        SCOPED_TRACE(name);
        const LoadedCase lc = load_case(*find_builtin(name));
        const NonlocalIsometryOp b = lc.op();
        ASSERT_TRUE(pair_check(lc.eta, b).valid());
        const Metric combined = Pencil(lc.metric, lc.eta.metric(lc.metric.coords())).combined();  // g + lambda eta
        NonlocalIsometryOp pencil{combined, b.gamma, Expr(0), b.epsilon, b.f};
        const Report r = validate_nonlocal(pencil);
        EXPECT_TRUE(r.valid()) << (r.first_failure() ? r.first_failure()->name + ": " + r.first_failure()->detail : "");
    }
}

TEST(Property, CompatibleIsSymmetricForFlatMetrics) {
    for (const auto& record : builtin_cases()) {
        if (record.n != 2 || record.name == "g9") continue;
        SCOPED_TRACE(record.name);
        const LoadedCase lc = load_case(record);
        const Metric eta = lc.eta.metric(lc.metric.coords());
        EXPECT_EQ(compatible(eta, lc.metric).holds, compatible(lc.metric, eta).holds);
    }
}

TEST(Property, IsometryIsKillingForBothMetrics) {
    for (const auto& record : builtin_cases()) {
        if (record.n != 2) continue;
        SCOPED_TRACE(record.name);
        const LoadedCase lc = load_case(record);
        EXPECT_TRUE(holds(killing_check(lc.eta.metric(lc.metric.coords()), lc.isometry)));
        EXPECT_TRUE(holds(killing_check(lc.metric, lc.isometry)));
    }
}
