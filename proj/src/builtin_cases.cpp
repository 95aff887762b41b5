#include <algorithm>

#include "pencil_forge/catalog.hpp"

namespace pencil_forge {

namespace {

using Row = std::vector<SymbolText>;

SymbolText sym(std::string dx, std::string mult, std::vector<std::pair<std::string, std::string>> nonlocal = {}) {
    return {std::move(dx), std::move(mult), std::move(nonlocal)};
}

const std::vector<std::pair<std::string, std::string>> tail = {{"1", "1"}};

CaseRecord two_component(std::string name, std::string description, std::vector<ParameterSpec> parameters,
                         std::vector<std::vector<std::string>> metric, std::vector<std::string> isometry) {
    CaseRecord r;
    r.name = std::move(name);
    r.description = std::move(description);
    r.n = 2;
    r.coordinates = {"u", "v"};
    r.parameters = std::move(parameters);
    r.metric = std::move(metric);
    r.isometry = std::move(isometry);
    return r;
}

RecursionReference printed(std::vector<Row> matrix) {
    RecursionReference ref;
    ref.matrix = std::move(matrix);
    return ref;
}

CaseRecord g1() {
    CaseRecord r = two_component("g1", "f = d_u, metric [[alpha/v, beta], [beta, v]]",
                                 {{"alpha", ""}, {"beta", ""}}, {{"alpha/v", "beta"}, {"beta", "v"}}, {"1", "0"});
    r.parameters[0].nonzero = "alpha - beta^2";
    r.references.recursion = printed({
        {sym("beta", "u_x/2"), sym("alpha/v", "-alpha*v_x/(2*v^2)", tail)},
        {sym("v", "v_x/2"), sym("beta", "-u_x/2")},
    });
    return r;
}

CaseRecord g2() {
    CaseRecord r = two_component("g2", "f = d_u, metric [[g11(v), g12(v)], [g12(v), 0]]", {},
                                 {{"g11(v)", "g12(v)"}, {"g12(v)", "0"}}, {"1", "0"});
    r.functions = {{"g11", ""}, {"g12", "g12(v)"}};
    r.references.recursion = printed({
        {sym("g12(v)", "g12'(v)*v_x"), sym("g11(v)", "g11'(v)*v_x/2", tail)},
        {sym("0", "0"), sym("g12(v)", "0")},
    });
    return r;
}

CaseRecord g3() {
    CaseRecord r = two_component("g3", "f = d_u, metric [[0, beta], [beta, v]]", {{"beta", "beta"}},
                                 {{"0", "beta"}, {"beta", "v"}}, {"1", "0"});
    r.references.recursion = printed({
        {sym("beta", "u_x/2"), sym("0", "0", tail)},
        {sym("v", "v_x/2"), sym("beta", "-u_x/2")},
    });
    return r;
}

CaseRecord g4() {
    const std::string f = "f(-u + v)";
    const std::string fp = "f'(-u + v)";
    CaseRecord r = two_component("g4", "f = d_u + d_v, metric [[f(-u+v), -f(-u+v) + beta], [-f(-u+v) + beta, f(-u+v)]]",
                                 {{"beta", "beta"}}, {{f, "-" + f + " + beta"}, {"-" + f + " + beta", f}}, {"1", "1"});
    r.functions = {{"f", ""}};
    r.references.recursion = printed({
        {sym("-" + f + " + beta", fp + "/2*(u_x - v_x)", tail), sym(f, fp + "/2*(v_x - u_x)", tail)},
        {sym(f, fp + "/2*(v_x - u_x)", tail), sym("-" + f + " + beta", fp + "/2*(u_x - v_x)", tail)},
    });
    return r;
}

CaseRecord g5() {
    CaseRecord r = two_component("g5", "f = d_u + d_v, metric [[-u + v, beta], [beta, 0]]", {{"beta", "beta"}},
                                 {{"-u + v", "beta"}, {"beta", "0"}}, {"1", "1"});
    r.references.recursion = printed({
        {sym("beta", "v_x/2", tail), sym("-u + v", "-u_x/2 + v_x/2", tail)},
        {sym("0", "0", tail), sym("beta", "-v_x/2", tail)},
    });
    return r;
}

CaseRecord g6() {
    CaseRecord r = two_component("g6", "f = d_u + d_v, metric [[alpha, beta], [beta, gamma]]",
                                 {{"alpha", ""}, {"beta", ""}, {"gamma", ""}},
                                 {{"alpha", "beta"}, {"beta", "gamma"}}, {"1", "1"});
    r.parameters[0].nonzero = "alpha*gamma - beta^2";
    r.references.recursion = printed({
        {sym("beta", "0", tail), sym("alpha", "0", tail)},
        {sym("gamma", "0", tail), sym("beta", "0", tail)},
    });
    return r;
}

CaseRecord g7() {
    CaseRecord r = two_component("g7", "f = u d_u - v d_v, metric [[(alpha*u*v + eps2)/v^2, beta], [beta, 0]]",
                                 {{"alpha", ""}, {"beta", "beta"}, {"eps2", ""}},
                                 {{"(alpha*u*v + eps2)/v^2", "beta"}, {"beta", "0"}}, {"u", "-v"});
    r.references.recursion = printed({
        {sym("beta", "-alpha*v_x/(2*v)", {{"-u", "v"}}),
         sym("(alpha*u*v + eps2)/v^2", "alpha*u_x/(2*v) + (alpha*u/(2*v^2) - (alpha*u*v + eps2)/v^3)*v_x",
             {{"u", "u"}})},
        {sym("0", "0", {{"v", "v"}}), sym("beta", "alpha*v_x/(2*v)", {{"-v", "u"}})},
    });
    return r;
}

CaseRecord g8() {
    CaseRecord r = two_component("g8", "f = u d_u - v d_v, metric [[u/v, beta], [beta, alpha*v/u]]",
                                 {{"alpha", "alpha - beta^2"}, {"beta", ""}},
                                 {{"u/v", "beta"}, {"beta", "alpha*v/u"}}, {"u", "-v"});
    r.references.recursion = printed({
        {sym("beta", "alpha*u_x/(2*u) - v_x/(2*v)", {{"-u", "v"}}),
         sym("u/v", "u_x/(2*v) - u*v_x/(2*v^2)", {{"u", "u"}})},
        {sym("alpha*v/u", "-alpha*v*u_x/(2*u^2) + alpha*v_x/(2*u)", {{"v", "v"}}),
         sym("beta", "-alpha*u_x/(2*u) + v_x/(2*v)", {{"-v", "u"}})},
    });
    return r;
}

CaseRecord g9() {
    const std::string F =
        "(gamma*u*v + eps2 + sqrt((gamma^2 - 4*alpha)*u^2*v^2 + 2*gamma*eps2*u*v + eps2^2))/(2*u^2)";
    CaseRecord r = two_component("g9", "f = u d_u - v d_v, metric [[alpha/F, beta], [beta, F]] with radical F",
                                 {{"alpha", "alpha - beta^2"}, {"beta", ""}, {"gamma", ""}, {"eps2", ""}},
                                 {{"alpha/(" + F + ")", "beta"}, {"beta", F}}, {"u", "-v"});
    RecursionReference none;
    none.note = "no printed reference";
    r.references.recursion = none;
    return r;
}

CaseRecord astigmatism() {
    CaseRecord r = two_component("astigmatism", "constant astigmatism pair, f = d_v, metric [[u, beta], [beta, alpha/u]]",
                                 {{"alpha", "alpha - beta^2"}, {"beta", ""}, {"eps", ""}},
                                 {{"u", "beta"}, {"beta", "alpha/u"}}, {"0", "1"});
    r.epsilon = "eps";
    r.references.christoffel = {
        {{"1/2", "0"}, {"0", "-1/2"}},
        {{"0", "1/2"}, {"-alpha/(2*u^2)", "0"}},
    };
    FlowReference casimir;
    casimir.name = "casimir";
    casimir.kind = "apply";
    casimir.covector = {"0", "-2"};
    casimir.expected = {"v_x", "alpha/u^2*u_x - 2*eps*x"};
    FlowReference magri;
    magri.name = "magri";
    magri.kind = "magri";
    magri.density = "-2*v";
    magri.expected_density = "v^2/2 - ln(u) - x^2*u";
    magri.expected = {"v_x", "u_x/u^2 - 2*x"};
    magri.substitute = {{"alpha", "1"}, {"eps", "1"}};
    r.references.flows = {casimir, magri};
    RecursionReference rec = printed({
        {sym("0", "-v_x/2"), sym("u", "u_x/2")},
        {sym("1/u", "-u_x/(2*u^2)", tail), sym("0", "v_x/2")},
    });
    rec.substitute = {{"alpha", "1"}, {"beta", "0"}, {"eps", "1"}};
    r.references.recursion = rec;
    r.references.degenerate_split = false;
    return r;
}

CaseRecord wdvv3() {
    CaseRecord r;
    r.name = "wdvv3";
    r.description = "three-component WDVV pair, f = d_u, metric with degenerate part g - eta";
    r.n = 3;
    r.coordinates = {"u", "v", "w"};
    r.metric = {
        {"v^3/w^2", "-3*v^2/(2*w)", "-v + 1"},
        {"-3*v^2/(2*w)", "2*v + 1", "w"},
        {"-v + 1", "w", "0"},
    };
    r.isometry = {"1", "0", "0"};
    r.references.christoffel = {
        {{"0", "3*v^2/(2*w^2)", "-v^3/w^3"}, {"1", "0", "0"}, {"0", "0", "0"}},
        {{"-1", "-3*v/w", "3*v^2/(2*w^2)"}, {"0", "1", "0"}, {"0", "0", "0"}},
        {{"0", "-1", "0"}, {"0", "0", "1"}, {"0", "0", "0"}},
    };
    r.references.liouville = {
        {"v^3/(2*w^2)", "u", "1"},
        {"-3*v^2/(2*w) - u", "(2*v + 1)/2", "0"},
        {"-v", "w", "0"},
    };
    r.references.h_potentials = {"-u*v - v^3/(2*w)", "u*w + v^2/2 + v/2", "w"};
    const std::vector<std::string> system = {
        "-3*v^2/(2*w^2)*v_x + v^3/w^3*w_x - x",
        "u_x + 3*v/w*v_x - 3*v^2/(2*w^2)*w_x",
        "v_x",
    };
    FlowReference casimir;
    casimir.name = "casimir";
    casimir.kind = "apply";
    casimir.covector = {"1", "0", "0"};
    casimir.expected = system;
    casimir.up_to_sign = true;
    FlowReference density;
    density.name = "density";
    density.kind = "density";
    density.density = "u*v + v^3/(2*w) - x^2*w/2";
    density.expected = system;
    FlowReference magri;
    magri.name = "magri";
    magri.kind = "magri";
    magri.density = "-u";
    magri.expected = system;
    r.references.flows = {casimir, density, magri};
    r.references.degenerate_split = true;
    r.references.wdvv_identities = true;
    return r;
}

}  // namespace

std::vector<CaseRecord> builtin_cases() {
    std::vector<CaseRecord> cases = {astigmatism(), g1(), g2(), g3(), g4(), g5(), g6(), g7(), g8(), g9(), wdvv3()};
    std::sort(cases.begin(), cases.end(), [](const CaseRecord& a, const CaseRecord& b) { return a.name < b.name; });
    return cases;
}

std::optional<CaseRecord> find_builtin(const std::string& name) {
    for (auto& c : builtin_cases())
        if (c.name == name) return c;
    return std::nullopt;
}

}  // namespace pencil_forge
