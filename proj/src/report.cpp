#include "pencil_forge/report.hpp"

namespace pencil_forge {

const char* to_string(Status s) {
    switch (s) {
        case Status::pass:
            return "pass";
        case Status::fail:
            return "fail";
        case Status::error:
            return "error";
        case Status::skipped:
            return "skipped";
    }
    return "?";
}

bool Report::valid() const { return first_failure() == nullptr; }

const CheckResult* Report::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

const CheckResult* Report::first_failure() const {
    for (const auto& c : checks)
        if (c.status == Status::fail || c.status == Status::error) return &c;
    return nullptr;
}

void Report::add(std::string name, const Verdict& v) {
    checks.push_back({std::move(name), v.holds ? Status::pass : Status::fail, v.witness, 0});
}

void Report::add(std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok ? Status::pass : Status::fail, std::move(detail), 0});
}

void Report::add_error(std::string name, std::string message) {
    checks.push_back({std::move(name), Status::error, std::move(message), 0});
}

void Report::add_skipped(std::string name, std::string note) {
    checks.push_back({std::move(name), Status::skipped, std::move(note), 0});
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (auto c : other.checks) {
        c.name = prefix + c.name;
        checks.push_back(std::move(c));
    }
}

}  // namespace pencil_forge
