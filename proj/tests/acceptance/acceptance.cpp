// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pencil_forge/catalog.hpp"
#include "pencil_forge/errors.hpp"
#include "pencil_forge/hierarchy.hpp"
#include "pencil_forge/pencil.hpp"
#include "pencil_forge/probe.hpp"

using namespace pencil_forge;

namespace {

// Pinned limits. Symbolic checks are exact: zero after normalization.
constexpr double radical_case_seconds = 60.0;
constexpr double case_seconds = 5.0;
constexpr unsigned probe_points = 100;
constexpr int random_metrics = 20;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

/// Collects failures of one criterion.
struct Outcome {
    std::vector<std::string> failures;
    std::string note;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void expect(const Verdict& v, const std::string& what) {
        if (!v.holds) failures.push_back(what + " (" + v.witness + ")");
    }
};

std::vector<Var> coords(const Context& c) {
    std::vector<Var> out;
    for (std::size_t i = 0; i < c.dimension(); ++i) out.push_back(c.field_var(i));
    return out;
}

Matrix matrix(const Context& c, const std::vector<std::vector<std::string>>& text) {
    Matrix m;
    for (const auto& row : text) {
        std::vector<Expr> r;
        for (const auto& s : row) r.push_back(c.parse(s));
        m.push_back(std::move(r));
    }
    return m;
}

std::vector<Expr> exprs(const Context& c, const std::vector<std::string>& text) {
    std::vector<Expr> out;
    for (const auto& s : text) out.push_back(c.parse(s));
    return out;
}

QuasilinearFlow flow(const Context& c, const std::vector<std::string>& rhs) { return flow_from_rhs(exprs(c, rhs), c); }

bool same(const Expr& a, const Expr& b) { return is_zero(a - b); }

const std::vector<std::string> sourced_system = {
    "-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x - x",
    "u_x + 3*v/w*v_x - 3*v^2/(2*w^2)*w_x",
    "v_x",
};

const std::vector<std::vector<std::string>> wdvv_metric = {
    {"v^3/w^2", "-3*v^2/(2*w)", "-v + 1"},
    {"-3*v^2/(2*w)", "2*v + 1", "w"},
    {"-v + 1", "w", "0"},
};

// ---------------------------------------------------------------- criteria

Outcome classification() {
    Outcome out;
    std::ostringstream times;
    for (const char* name : {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8", "g9"}) {
        const auto start = Clock::now();
        const LoadedCase lc = load_case(*find_builtin(name));
        const Metric& g = lc.metric;
        const std::size_t n = g.dim();
        bool symmetric = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) symmetric = symmetric && same(g(i, j), g(j, i));
        out.expect(symmetric, std::string(name) + " symmetric");
        out.expect(is_flat(g), std::string(name) + " flat");
        out.expect(compatible(lc.eta.metric(g.coords()), g), std::string(name) + " compatible with eta");
        out.expect(killing_check(g, lc.isometry), std::string(name) + " Killing");
        out.expect(cyclic_check(g, lc.isometry), std::string(name) + " cyclic");
        const double s = since(start);
        const double limit = std::string(name) == "g9" ? radical_case_seconds : case_seconds;
        out.expect(s < limit, std::string(name) + " time limit");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s %.2fs", name, s);
        times << (times.tellp() > 0 ? ", " : "") << buf;
    }
    out.note = times.str();
    return out;
}

Outcome astigmatism() {
    Outcome out;
    Context c({"u", "v"});
    c.add_parameter("alpha").add_parameter("beta").add_parameter("eps");
    const Metric g(matrix(c, {{"u", "beta"}, {"beta", "alpha/u"}}), coords(c));
    const Tensor3 gamma = levi_civita(g).contravariant;
    const std::vector<std::vector<std::vector<std::string>>> printed = {
        {{"1/2", "0"}, {"0", "-1/2"}},
        {{"0", "1/2"}, {"-alpha/(2*u^2)", "0"}},
    };
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                out.expect(same(gamma(i, j, k), c.parse(printed[i][j][k])), "Christoffel table");

    const NonlocalIsometryOp b = make_nonlocal(g, Expr(0), c.parse("eps"), exprs(c, {"0", "1"}));
    out.expect(flow_equal(apply_operator(b, {Expr(0), Expr(-2)}, c), flow(c, {"v_x", "alpha/u^2*u_x - 2*eps*x"}), c),
               "Casimir flow");

    const NonlocalIsometryOp b1 =
        make_nonlocal(Metric(matrix(c, {{"u", "beta"}, {"beta", "1/u"}}), coords(c)), Expr(0), Expr(1), b.f);
    const Expr h1 = magri_step(ConstantOp::antidiagonal(2), b1, c.parse("-2*v"), c);
    out.expect(same(h1, c.parse("v^2/2 - ln(u) - x^2*u")), "Magri density");
    // v_t = -(1/u)_x - 2x expanded by hand
    out.expect(flow_equal(flow_from_density(ConstantOp::antidiagonal(2), h1, c), flow(c, {"v_x", "u_x/u^2 - 2*x"}), c),
               "Magri flow");
    return out;
}

Outcome wdvv_pair() {
    Outcome out;
    const Context c({"u", "v", "w"});
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    const Metric g(matrix(c, wdvv_metric), coords(c));
    const NonlocalIsometryOp b = make_nonlocal(g, Expr(0), Expr(1), exprs(c, {"1", "0", "0"}));
    const QuasilinearFlow expected = flow(c, sourced_system);

    out.expect(flow_equal(flow_from_density(eta, c.parse("u*v + v^3/(2*w) - x^2*w/2"), c), expected, c),
               "density flow");
    const QuasilinearFlow casimir = apply_operator(b, variational_gradient(c.parse("u"), c), c);
    out.expect(flow_equal_up_to_sign(casimir, expected, c), "Casimir flow up to sign");
    out.note = flow_equal(casimir, expected, c).holds ? "Casimir sign +1" : "Casimir sign -1 (recorded)";
    out.expect(liouville_gauge_equal(liouville_potential(b),
                                     matrix(c, {{"v^3/(2*w^2)", "u", "1"},
                                                {"-3*v^2/(2*w) - u", "(2*v + 1)/2", "0"},
                                                {"-v", "w", "0"}}),
                                     coords(c)),
               "Liouville potential");
    out.expect(h_potential_check(b, eta, exprs(c, {"-u*v - v^3/(2*w)", "u*w + v^2/2 + v/2", "w"})), "H-potentials");
    out.expect(degenerate_split(g, eta), "degenerate split");
    return out;
}

Outcome chazy_wdvv() {
    Outcome out;
    const Context c = wdvv_context();
    const Var w = c.field_var(2);
    out.expect(is_zero(chazy_residual(c.parse("-2/w"), w)), "Chazy at -2/w");
    out.expect(same(wdvv_residual(wdvv_ansatz(c), c), c.parse("-v^4/16") * chazy_residual(c.parse("gamma(w)"), w)),
               "WDVV residual factorization");

    const Context d({"u", "v", "w"});
    const Expr f = d.parse("u^2*w/2 + u*v^2/2 + v^4/(8*w)");
    const ConstantOp eta = ConstantOp::antidiagonal(3);
    const QuasilinearFlow t = wdvv_flow(f, eta, 2, d);
    const QuasilinearFlow y = wdvv_flow(f, eta, 3, d);
    // conservative forms expanded by hand
    out.expect(flow_equal(t, flow(d, {"-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x", "u_x + 3*v/w*v_x - 3*v^2/(2*w^2)*w_x", "v_x"}),
                          d),
               "system (t)");
    out.expect(flow_equal(y, flow(d, {"v^3/w^3*v_x - 3*v^4/(4*w^4)*w_x", "-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x", "u_x"}), d),
               "system (y)");
    out.expect(commute_check(t, y, d), "flows commute");
    return out;
}

Outcome recursion_operators() {
    Outcome out;
    for (const char* name : {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"}) {
        const VerificationReport r = verify_case(*find_builtin(name));
        const CheckResult* check = r.report.find("ref.recursion");
        out.expect(check && check->status == Status::pass,
                   std::string(name) + " recursion" + (check ? " (" + check->detail + ")" : " missing"));
    }
    const LoadedCase g9 = load_case(*find_builtin("g9"));
    try {
        const RecursionOperator r = recursion_operator(g9.eta, g9.op(), g9.ctx);
        out.expect(r.dim() == 2, "g9 recursion shape");
    } catch (const Error& e) {
        out.expect(false, std::string("g9 recursion: ") + e.what());
    }
    return out;
}

std::string random_coefficient(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    return "(" + std::to_string(num(rng)) + "/" + std::to_string(den(rng)) + ")";
}

std::string random_entry(std::mt19937& rng, int terms) {
    std::uniform_int_distribution<int> deg(0, 2);
    std::string out = random_coefficient(rng);
    for (int t = 0; t < terms; ++t) out += " + " + random_coefficient(rng) + "*u^" + std::to_string(deg(rng)) + "*v^" +
                                           std::to_string(deg(rng));
    return out;
}

Metric random_metric(std::mt19937& rng, const Context& c) {
    for (;;) {
        const std::string a = random_entry(rng, 2), b = random_entry(rng, 1), d = random_entry(rng, 2);
        Metric g(matrix(c, {{a, b}, {b, d}}), coords(c));
        if (!is_zero(g.determinant())) return g;
    }
}

bool metric_compatible(const Metric& g) {
    const Tensor3 defect = metricity_defect(g, levi_civita(g).lowered);
    const std::size_t n = g.dim();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!is_zero(defect(k, i, j))) return false;
    return true;
}

Outcome properties_bcd(std::string& detail) {
    Outcome out;
    const Context c({"u", "v"});
    std::mt19937 rng(2024);

    std::size_t metricity = 0;
    for (const auto& record : builtin_cases()) {
        out.expect(metric_compatible(load_case(record).metric), "metricity " + record.name);
        ++metricity;
    }
    for (int i = 0; i < random_metrics; ++i) {
        const Metric g = random_metric(rng, c);
        out.expect(metric_compatible(g), "metricity random");
        ++metricity;
        const Curvature r = riemann(g);
        bool bianchi = true;
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t k = 0; k < 2; ++k)
                    for (std::size_t l = 0; l < 2; ++l)
                        bianchi = bianchi && is_zero(r.mixed(a, b, k, l) + r.mixed(a, k, l, b) + r.mixed(a, l, b, k));
        out.expect(bianchi, "first Bianchi identity");
    }

    std::size_t injected = 0, flipped = 0;
    for (const auto& record : builtin_cases())
        for (std::size_t i = 0; i < record.n; ++i)
            for (std::size_t j = 0; j < record.n; ++j) {
                ++injected;
                if (!verify_case(inject_fault(record, i, j), {.fail_fast = true}).valid()) ++flipped;
            }
    out.expect(flipped == injected, "fault injection");
    detail = std::to_string(metricity) + " metrics compatible, " + std::to_string(random_metrics) +
             " Bianchi metrics, " + std::to_string(flipped) + "/" + std::to_string(injected) + " faults detected";
    return out;
}

Outcome negative_controls() {
    Outcome out;
    Context c({"u", "v"});
    c.add_parameter("k").add_parameter("alpha").add_parameter("beta");
    const std::string conf = "(1 + k/4*(u^2 + v^2))^2";
    const Metric sphere(matrix(c, {{conf, "0"}, {"0", conf}}), coords(c));
    out.expect(!is_flat(sphere).holds, "curved metric is not flat");
    const auto k = constant_curvature(sphere);
    out.expect(k.has_value() && same(*k, c.parse("k")), "constant curvature equals k");

    const Metric ast(matrix(c, {{"u", "beta"}, {"beta", "alpha/u"}}), coords(c));
    out.expect(!killing_check(ast, exprs(c, {"1", "1"})).holds, "f = (1, 1) not Killing");

    const Metric bad(matrix(c, {{"u", "0"}, {"0", "1"}}), coords(c));
    out.expect(!pair_check(ConstantOp::antidiagonal(2), make_nonlocal(bad, Expr(0), Expr(1), exprs(c, {"0", "1"})))
                    .valid(),
               "pair check rejects [[u, 0], [0, 1]]");
    return out;
}

Outcome guarded(const std::function<Outcome()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        Outcome out;
        out.failures.push_back(std::string("error: ") + e.what());
        return out;
    }
}

std::string summary(const Outcome& o) {
    if (o.failures.empty()) return o.note;
    std::string s = o.failures.front();
    if (o.failures.size() > 1) s += " (+" + std::to_string(o.failures.size() - 1) + " more)";
    return s;
}

}  // namespace

int main() {
    const auto start = Clock::now();
    ZeroTestOracle oracle(probe_points);
    oracle.install();

    std::vector<std::pair<std::string, Outcome>> rows;
    rows.emplace_back("1 classification g1..g9", guarded(classification));
    rows.emplace_back("2 astigmatism reproduction", guarded(astigmatism));
    rows.emplace_back("3 WDVV reproduction", guarded(wdvv_pair));
    rows.emplace_back("4 Chazy and WDVV flows", guarded(chazy_wdvv));
    rows.emplace_back("5 recursion operators", guarded(recursion_operators));
    std::string detail;
    Outcome props = guarded([&] { return properties_bcd(detail); });
    Outcome controls = guarded(negative_controls);

    oracle.uninstall();
    props.expect(oracle.disagreements() == 0, "zero-test oracle: " + std::to_string(oracle.disagreements()) +
                                                  " disagreements");
    if (props.failures.empty())
        props.note = std::to_string(oracle.decisions()) + " zero tests probed at " + std::to_string(probe_points) +
                     " points, 0 disagreements; " + detail;
    rows.emplace_back("6 property suites", props);
    rows.emplace_back("7 negative controls", controls);

    bool all = true;
    for (const auto& [name, outcome] : rows) {
        const bool ok = outcome.failures.empty();
        all = all && ok;
        const std::string s = summary(outcome);
        std::printf("%s criterion %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), s.empty() ? "" : ": ", s.c_str());
    }
    std::printf("total %.2fs\n", since(start));
    return all ? 0 : 1;
}
