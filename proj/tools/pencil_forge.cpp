#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "case_json.hpp"
#include "pencil_forge/probe.hpp"

namespace fs = std::filesystem;
using namespace pencil_forge;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Options {
    std::string format = "text";
    bool timings = false;
    bool fail_fast = false;
    std::vector<std::string> targets;
    std::string target;
    std::string density;
    int steps = 1;
    std::vector<std::string> sets;
    std::string directory;
};

bool json_output(const Options& o) { return o.format == "json"; }

CaseRecord resolve(const std::string& target) {
    if (auto builtin = find_builtin(target)) return *builtin;
    if (fs::exists(target)) return read_case_file(target);
    throw FileError("'" + target + "' is neither a builtin case nor a readable file");
}

/// Applies --set name=expr overrides as parameter bindings.
void apply_sets(CaseRecord& record, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw SchemaError("--set expects name=expr, got '" + s + "'");
        record.bindings[s.substr(0, eq)] = s.substr(eq + 1);
    }
}

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_verify(const Options& o) {
    std::vector<CaseRecord> records;
    if (o.targets.empty()) {
        records = builtin_cases();
    } else {
        for (const auto& t : o.targets) records.push_back(resolve(t));
    }
    for (const auto& r : records) load_case(r);

    VerifyOptions options;
    options.fail_fast = o.fail_fast;
    std::vector<VerificationReport> reports;
    if (o.targets.empty()) {
        reports = verify_all(records, options);
    } else {
        for (const auto& r : records) reports.push_back(verify_case(r, options));
    }

    bool all = true;
    for (const auto& r : reports) all = all && r.valid();
    if (json_output(o)) {
        Json out = Json::array();
        for (const auto& r : reports) out.push_back(report_to_json(r, o.timings));
        print_json(out);
    } else {
        std::size_t valid = 0;
        for (const auto& r : reports) {
            std::cout << report_to_text(r, o.timings);
            valid += r.valid() ? 1 : 0;
        }
        if (reports.size() > 1) std::cout << valid << "/" << reports.size() << " cases valid\n";
    }
    return all ? exit_pass : exit_fail;
}

int cmd_recursion(const Options& o) {
    CaseRecord record = resolve(o.target);
    apply_sets(record, o.sets);
    const LoadedCase lc = load_case(record);
    const RecursionOperator r = recursion_operator(lc.eta, lc.op(), lc.ctx);

    std::string annotation;
    bool matches = true;
    if (record.references.recursion) {
        const RecursionReference& ref = *record.references.recursion;
        if (ref.matrix.empty()) {
            annotation = ref.note.empty() ? "no printed reference" : ref.note;
        } else if (!ref.substitute.empty() || !o.sets.empty()) {
            annotation = "printed reference is checked by verify";
        } else {
            RecursionOperator expected;
            for (const auto& row : ref.matrix) {
                std::vector<OperatorSymbol> cells;
                for (const auto& s : row) {
                    OperatorSymbol sym{lc.parse(s.dx), lc.parse(s.mult), {}};
                    for (const auto& [a, b] : s.nonlocal) sym.nonlocal.emplace_back(lc.parse(a), lc.parse(b));
                    cells.push_back(std::move(sym));
                }
                expected.entries.push_back(std::move(cells));
            }
            const Verdict v = recursion_equal(r, expected, lc.ctx);
            matches = v.holds;
            annotation = v.holds ? "matches printed reference" : "differs from printed reference: " + v.witness;
        }
    }

    if (json_output(o)) {
        Json out;
        out["name"] = record.name;
        out["matrix"] = recursion_to_json(r);
        out["factor"] = "dx^-1";
        if (!annotation.empty()) out["reference"] = annotation;
        print_json(out);
    } else {
        std::cout << "R = M * dx^-1 for " << record.name << "\n" << recursion_to_text(r);
        if (!annotation.empty()) std::cout << "(" << annotation << ")\n";
    }
    return matches ? exit_pass : exit_fail;
}

std::vector<std::string> flow_lines(const QuasilinearFlow& flow, const Context& ctx) {
    std::vector<std::string> lines;
    const std::vector<Expr> rhs = flow.rhs(ctx);
    for (std::size_t i = 0; i < rhs.size(); ++i) lines.push_back(ctx.fields()[i] + "_t = " + render(rhs[i]));
    return lines;
}

int cmd_magri(const Options& o) {
    if (o.steps < 1) throw SchemaError("--steps must be at least 1");
    CaseRecord record = resolve(o.target);
    apply_sets(record, o.sets);
    const LoadedCase lc = load_case(record);
    Expr h = lc.parse(o.density);
    require_jet_free(h, lc.ctx);
    const NonlocalIsometryOp b = lc.op();

    Json steps = Json::array();
    int status = exit_pass;
    std::string obstruction;
    for (int k = 1; k <= o.steps; ++k) {
        try {
            h = magri_step(lc.eta, b, h, lc.ctx);
        } catch (const Error& e) {
            obstruction = "step " + std::to_string(k) + ": " + e.what();
            status = exit_fail;
            break;
        }
        const auto lines = flow_lines(flow_from_density(lc.eta, h, lc.ctx), lc.ctx);
        if (json_output(o)) {
            Json step;
            step["k"] = k;
            step["density"] = render(h);
            step["flow"] = lines;
            steps.push_back(std::move(step));
        } else {
            std::cout << "h" << k << " = " << render(h) << "\n";
            for (const auto& l : lines) std::cout << "  " << l << "\n";
        }
    }
    if (json_output(o)) {
        Json out;
        out["name"] = record.name;
        out["density"] = render(lc.parse(o.density));
        out["steps"] = std::move(steps);
        if (!obstruction.empty()) out["obstruction"] = obstruction;
        print_json(out);
    }
    if (!obstruction.empty()) std::cerr << "pencil-forge: magri recursion stopped at " << obstruction << "\n";
    return status;
}

int cmd_catalog_list(const Options& o) {
    const auto cases = builtin_cases();
    if (json_output(o)) {
        Json out = Json::array();
        for (const auto& c : cases) {
            Json e;
            e["name"] = c.name;
            e["n"] = c.n;
            e["description"] = c.description;
            out.push_back(std::move(e));
        }
        print_json(out);
    } else {
        std::size_t width = 0;
        for (const auto& c : cases) width = std::max(width, c.name.size());
        for (const auto& c : cases)
            std::cout << c.name << std::string(width - c.name.size() + 2, ' ') << c.description << "\n";
    }
    return exit_pass;
}

int cmd_catalog_export(const Options& o) {
    std::error_code ec;
    fs::create_directories(o.directory, ec);
    if (ec) throw FileError("cannot create '" + o.directory + "': " + ec.message());
    Json written = Json::array();
    for (const auto& c : builtin_cases()) {
        const fs::path path = fs::path(o.directory) / (c.name + ".json");
        write_case_file(c, path);
        written.push_back(path.string());
    }
    if (json_output(o)) {
        print_json(written);
    } else {
        for (const auto& p : written) std::cout << p.get<std::string>() << "\n";
    }
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification of first-order Hamiltonian operators of hydrodynamic type", "pencil-forge"};
    app.require_subcommand(1);
    Options o;
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    int (*handler)(const Options&) = nullptr;

    auto* verify = app.add_subcommand("verify", "Run every check on builtin cases or case files");
    verify->add_option("targets", o.targets, "Builtin case names or case files (default: all builtins)");
    add_format(verify);
    verify->add_flag("--timings", o.timings, "Include timings");
    verify->add_flag("--fail-fast", o.fail_fast, "Stop each case at its first failing check");
    verify->callback([&] { handler = cmd_verify; });

    auto* recursion = app.add_subcommand("recursion", "Print the recursion operator R = M dx^-1");
    recursion->add_option("target", o.target, "Builtin case name or case file")->required();
    recursion->add_option("--set", o.sets, "Parameter binding name=expr");
    add_format(recursion);
    recursion->callback([&] { handler = cmd_recursion; });

    auto* magri = app.add_subcommand("magri", "Run the Magri recursion from a starting density");
    magri->add_option("target", o.target, "Builtin case name or case file")->required();
    magri->add_option("--density", o.density, "Starting density h0(x, u)")->required();
    magri->add_option("--steps", o.steps, "Number of recursion steps");
    magri->add_option("--set", o.sets, "Parameter binding name=expr");
    add_format(magri);
    magri->callback([&] { handler = cmd_magri; });

    auto* catalog = app.add_subcommand("catalog", "List or export the builtin cases");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list", "List builtin cases");
    add_format(list);
    list->callback([&] { handler = cmd_catalog_list; });
    auto* exporter = catalog->add_subcommand("export", "Write every builtin case as a JSON case file");
    exporter->add_option("directory", o.directory, "Output directory")->required();
    add_format(exporter);
    exporter->callback([&] { handler = cmd_catalog_export; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    std::optional<ZeroTestOracle> oracle;
    if (const unsigned probes = default_probe_count(); probes > 0) {
        oracle.emplace(probes);
        oracle->install();
    }

    int status = exit_usage;
    try {
        status = handler(o);
    } catch (const Error& e) {
        std::cerr << "pencil-forge: " << e.what() << "\n";
        return exit_usage;
    }

    if (oracle && oracle->disagreements() > 0) {
        std::cerr << "pencil-forge: zero-test oracle found " << oracle->disagreements() << " disagreements in "
                  << oracle->decisions() << " decisions\n";
        for (const auto& s : oracle->samples())
            std::cerr << "  decided " << (s.decided_zero ? "zero" : "nonzero") << ": " << s.expression << "\n";
        return exit_fail;
    }
    return status;
}
