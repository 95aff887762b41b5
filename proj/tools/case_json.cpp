#include "case_json.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace pencil_forge {

namespace {

class Fields {
public:
    Fields(const Json& j, std::string where, std::set<std::string> allowed) : j_(j), where_(std::move(where)) {
        if (!j.is_object()) throw SchemaError(where_ + ": expected an object");
        for (const auto& [key, value] : j.items())
            if (!allowed.count(key)) throw SchemaError(where_ + ": unknown key '" + key + "'");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& require(const std::string& key) const {
        if (!has(key)) throw SchemaError(where_ + ": missing key '" + key + "'");
        return j_.at(key);
    }

    std::string at(const std::string& key) const { return where_ + "." + key; }

private:
    const Json& j_;
    std::string where_;
};

std::string as_string(const Json& j, const std::string& where) {
    if (!j.is_string()) throw SchemaError(where + ": expected a string");
    return j.get<std::string>();
}

bool as_bool(const Json& j, const std::string& where) {
    if (!j.is_boolean()) throw SchemaError(where + ": expected a boolean");
    return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected an array");
    return j;
}

std::vector<std::string> strings(const Json& j, const std::string& where) {
    std::vector<std::string> out;
    std::size_t i = 0;
    for (const auto& e : as_array(j, where)) out.push_back(as_string(e, where + "[" + std::to_string(i++) + "]"));
    return out;
}

std::vector<std::vector<std::string>> string_matrix(const Json& j, const std::string& where) {
    std::vector<std::vector<std::string>> out;
    std::size_t i = 0;
    for (const auto& row : as_array(j, where)) out.push_back(strings(row, where + "[" + std::to_string(i++) + "]"));
    return out;
}

std::map<std::string, std::string> string_map(const Json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : j.items()) out[k] = as_string(v, where + "." + k);
    return out;
}

std::vector<ParameterSpec> parameter_list(const Json& j, const std::string& where) {
    std::vector<ParameterSpec> out;
    std::size_t i = 0;
    for (const auto& e : as_array(j, where)) {
        const std::string w = where + "[" + std::to_string(i++) + "]";
        Fields f(e, w, {"name", "nonzero"});
        ParameterSpec p;
        p.name = as_string(f.require("name"), f.at("name"));
        if (f.has("nonzero")) p.nonzero = as_string(e.at("nonzero"), f.at("nonzero"));
        out.push_back(std::move(p));
    }
    return out;
}

Json parameters_json(const std::vector<ParameterSpec>& ps) {
    Json out = Json::array();
    for (const auto& p : ps) {
        Json e;
        e["name"] = p.name;
        if (!p.nonzero.empty()) e["nonzero"] = p.nonzero;
        out.push_back(std::move(e));
    }
    return out;
}

Json symbol_text_json(const SymbolText& s) {
    Json e;
    e["dx"] = s.dx;
    e["mult"] = s.mult;
    if (!s.nonlocal.empty()) {
        Json pairs = Json::array();
        for (const auto& [l, r] : s.nonlocal) pairs.push_back(Json::array({l, r}));
        e["nonlocal"] = std::move(pairs);
    }
    return e;
}

SymbolText symbol_text(const Json& j, const std::string& where) {
    Fields f(j, where, {"dx", "mult", "nonlocal"});
    SymbolText s;
    if (f.has("dx")) s.dx = as_string(j.at("dx"), f.at("dx"));
    if (f.has("mult")) s.mult = as_string(j.at("mult"), f.at("mult"));
    if (f.has("nonlocal")) {
        for (const auto& pair : string_matrix(j.at("nonlocal"), f.at("nonlocal"))) {
            if (pair.size() != 2) throw SchemaError(f.at("nonlocal") + ": expected pairs");
            s.nonlocal.emplace_back(pair[0], pair[1]);
        }
    }
    return s;
}

Json recursion_reference_json(const RecursionReference& r) {
    Json out = Json::object();
    if (!r.substitute.empty()) out["substitute"] = r.substitute;
    if (!r.matrix.empty()) {
        Json rows = Json::array();
        for (const auto& row : r.matrix) {
            Json cells = Json::array();
            for (const auto& s : row) cells.push_back(symbol_text_json(s));
            rows.push_back(std::move(cells));
        }
        out["matrix"] = std::move(rows);
    }
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

RecursionReference recursion_reference(const Json& j, const std::string& where) {
    Fields f(j, where, {"substitute", "matrix", "note"});
    RecursionReference r;
    if (f.has("substitute")) r.substitute = string_map(j.at("substitute"), f.at("substitute"));
    if (f.has("matrix")) {
        std::size_t i = 0;
        for (const auto& row : as_array(j.at("matrix"), f.at("matrix"))) {
            const std::string w = f.at("matrix") + "[" + std::to_string(i++) + "]";
            std::vector<SymbolText> cells;
            std::size_t k = 0;
            for (const auto& cell : as_array(row, w)) cells.push_back(symbol_text(cell, w + "[" + std::to_string(k++) + "]"));
            r.matrix.push_back(std::move(cells));
        }
    }
    if (f.has("note")) r.note = as_string(j.at("note"), f.at("note"));
    return r;
}

Json flow_json(const FlowReference& r) {
    Json e;
    e["name"] = r.name;
    e["kind"] = r.kind;
    if (!r.covector.empty()) e["covector"] = r.covector;
    if (!r.density.empty()) e["density"] = r.density;
    if (!r.expected_density.empty()) e["expected_density"] = r.expected_density;
    e["expected"] = r.expected;
    if (r.up_to_sign) e["up_to_sign"] = true;
    if (!r.substitute.empty()) e["substitute"] = r.substitute;
    return e;
}

FlowReference flow(const Json& j, const std::string& where) {
    Fields f(j, where,
             {"name", "kind", "covector", "density", "expected_density", "expected", "up_to_sign", "substitute"});
    FlowReference r;
    r.name = as_string(f.require("name"), f.at("name"));
    r.kind = as_string(f.require("kind"), f.at("kind"));
    if (r.kind != "apply" && r.kind != "density" && r.kind != "magri")
        throw SchemaError(f.at("kind") + ": expected \"apply\", \"density\" or \"magri\"");
    if (f.has("covector")) r.covector = strings(j.at("covector"), f.at("covector"));
    if (f.has("density")) r.density = as_string(j.at("density"), f.at("density"));
    if (f.has("expected_density")) r.expected_density = as_string(j.at("expected_density"), f.at("expected_density"));
    r.expected = strings(f.require("expected"), f.at("expected"));
    if (f.has("up_to_sign")) r.up_to_sign = as_bool(j.at("up_to_sign"), f.at("up_to_sign"));
    if (f.has("substitute")) r.substitute = string_map(j.at("substitute"), f.at("substitute"));
    if (r.kind == "apply" && r.covector.empty()) throw SchemaError(where + ": apply flow needs a covector");
    if (r.kind != "apply" && r.density.empty()) throw SchemaError(where + ": " + r.kind + " flow needs a density");
    return r;
}

Json references_json(const References& r) {
    Json out = Json::object();
    if (!r.christoffel.empty()) out["christoffel"] = r.christoffel;
    if (!r.liouville.empty()) out["liouville"] = r.liouville;
    if (!r.h_potentials.empty()) out["h_potentials"] = r.h_potentials;
    if (r.recursion) out["recursion"] = recursion_reference_json(*r.recursion);
    if (!r.flows.empty()) {
        Json flows = Json::array();
        for (const auto& f : r.flows) flows.push_back(flow_json(f));
        out["flows"] = std::move(flows);
    }
    if (r.degenerate_split) out["degenerate_split"] = *r.degenerate_split;
    if (r.wdvv_identities) out["wdvv_identities"] = true;
    return out;
}

References references(const Json& j, const std::string& where) {
    Fields f(j, where,
             {"christoffel", "liouville", "h_potentials", "recursion", "flows", "degenerate_split", "wdvv_identities"});
    References r;
    if (f.has("christoffel")) {
        std::size_t i = 0;
        for (const auto& m : as_array(j.at("christoffel"), f.at("christoffel")))
            r.christoffel.push_back(string_matrix(m, f.at("christoffel") + "[" + std::to_string(i++) + "]"));
    }
    if (f.has("liouville")) r.liouville = string_matrix(j.at("liouville"), f.at("liouville"));
    if (f.has("h_potentials")) r.h_potentials = strings(j.at("h_potentials"), f.at("h_potentials"));
    if (f.has("recursion")) r.recursion = recursion_reference(j.at("recursion"), f.at("recursion"));
    if (f.has("flows")) {
        std::size_t i = 0;
        for (const auto& e : as_array(j.at("flows"), f.at("flows")))
            r.flows.push_back(flow(e, f.at("flows") + "[" + std::to_string(i++) + "]"));
    }
    if (f.has("degenerate_split")) r.degenerate_split = as_bool(j.at("degenerate_split"), f.at("degenerate_split"));
    if (f.has("wdvv_identities")) r.wdvv_identities = as_bool(j.at("wdvv_identities"), f.at("wdvv_identities"));
    return r;
}

}  // namespace

Json case_to_json(const CaseRecord& record) {
    Json j;
    j["name"] = record.name;
    if (!record.description.empty()) j["description"] = record.description;
    j["n"] = record.n;
    j["coordinates"] = record.coordinates;
    j["parameters"] = parameters_json(record.parameters);
    if (!record.functions.empty()) j["functions"] = parameters_json(record.functions);
    j["metric"] = record.metric;
    j["isometry"] = record.isometry;
    j["epsilon"] = record.epsilon;
    j["c"] = record.c;
    j["references"] = references_json(record.references);
    if (!record.expected_failures.empty()) j["expected_failures"] = record.expected_failures;
    if (!record.bindings.empty()) j["bindings"] = record.bindings;
    return j;
}

CaseRecord case_from_json(const Json& j) {
    Fields f(j, "case", {"name", "description", "n", "coordinates", "parameters", "functions", "metric", "isometry",
                         "epsilon", "c", "references", "expected_failures", "bindings"});
    CaseRecord r;
    r.name = as_string(f.require("name"), f.at("name"));
    if (f.has("description")) r.description = as_string(j.at("description"), f.at("description"));
    const Json& n = f.require("n");
    if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) throw SchemaError("case.n: expected a positive integer");
    r.n = n.get<std::size_t>();
    r.coordinates = strings(f.require("coordinates"), f.at("coordinates"));
    r.parameters = parameter_list(f.require("parameters"), f.at("parameters"));
    if (f.has("functions")) r.functions = parameter_list(j.at("functions"), f.at("functions"));
    r.metric = string_matrix(f.require("metric"), f.at("metric"));
    r.isometry = strings(f.require("isometry"), f.at("isometry"));
    r.epsilon = as_string(f.require("epsilon"), f.at("epsilon"));
    r.c = as_string(f.require("c"), f.at("c"));
    r.references = references(f.require("references"), f.at("references"));
    if (f.has("expected_failures")) r.expected_failures = strings(j.at("expected_failures"), f.at("expected_failures"));
    if (f.has("bindings")) r.bindings = string_map(j.at("bindings"), f.at("bindings"));
    return r;
}

CaseRecord read_case_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return case_from_json(j);
}

void write_case_file(const CaseRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write '" + path.string() + "'");
    out << case_to_json(record).dump(2) << '\n';
    if (!out) throw FileError("write to '" + path.string() + "' failed");
}

Json report_to_json(const VerificationReport& report, bool timings) {
    Json j;
    j["name"] = report.name;
    j["valid"] = report.valid();
    if (timings) j["seconds"] = report.seconds;
    Json checks = Json::array();
    for (const auto& c : report.report.checks) {
        Json e;
        e["name"] = c.name;
        e["status"] = to_string(c.status);
        if (!c.detail.empty()) e["detail"] = c.detail;
        if (timings) e["seconds"] = c.seconds;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    return j;
}

std::string report_to_text(const VerificationReport& report, bool timings) {
    std::ostringstream out;
    out << report.name << ": " << (report.valid() ? "valid" : "INVALID");
    if (timings) out << " (" << std::fixed << std::setprecision(3) << report.seconds << " s)";
    out << '\n';
    for (const auto& c : report.report.checks) {
        out << "  " << std::left << std::setw(8) << to_string(c.status) << c.name;
        if (timings) out << " [" << std::fixed << std::setprecision(3) << c.seconds << " s]";
        if (!c.detail.empty()) out << ": " << c.detail;
        out << '\n';
    }
    return out.str();
}

Json symbol_to_json(const OperatorSymbol& s) {
    Json e;
    e["dx"] = render(s.dx);
    e["mult"] = render(s.mult);
    Json pairs = Json::array();
    for (const auto& [l, r] : s.nonlocal) pairs.push_back(Json::array({render(l), render(r)}));
    e["nonlocal"] = std::move(pairs);
    e["text"] = render(s);
    return e;
}

Json recursion_to_json(const RecursionOperator& r) {
    Json rows = Json::array();
    for (const auto& row : r.entries) {
        Json cells = Json::array();
        for (const auto& s : row) cells.push_back(symbol_to_json(s));
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string recursion_to_text(const RecursionOperator& r) {
    const std::size_t n = r.dim();
    std::vector<std::vector<std::string>> cells(n);
    std::vector<std::size_t> width(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r.entries[i].size(); ++j) {
            cells[i].push_back(render(r.entries[i][j]));
            width[j] = std::max(width[j], cells[i][j].size());
        }
    std::ostringstream out;
    for (std::size_t i = 0; i < n; ++i) {
        out << "[ ";
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            if (j) out << " | ";
            out << cells[i][j];
            if (j + 1 < cells[i].size()) out << std::string(width[j] - cells[i][j].size(), ' ');
        }
        out << " ]" << (i + 1 == n ? " * dx^-1" : "") << '\n';
    }
    return out.str();
}

}  // namespace pencil_forge
