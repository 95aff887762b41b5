#pragma once

#include <string>
#include <vector>

#include "pencil_forge/diffgeo.hpp"

namespace pencil_forge {

enum class Status { pass, fail, error, skipped };

const char* to_string(Status s);

struct CheckResult {
    std::string name;
    Status status = Status::pass;
    /// Witness for failures, message for errors, annotation otherwise.
    std::string detail;
    double seconds = 0;
};

/// Ordered list of named checks. Skipped checks do not affect validity.
struct Report {
    std::vector<CheckResult> checks;

    bool valid() const;
    const CheckResult* find(const std::string& name) const;
    const CheckResult* first_failure() const;

    void add(std::string name, const Verdict& v);
    void add(std::string name, bool ok, std::string detail = {});
    void add_error(std::string name, std::string message);
    void add_skipped(std::string name, std::string note);
    /// Appends every check of `other`, prefixing names with `prefix`.
    void merge(const Report& other, const std::string& prefix = {});
};

}  // namespace pencil_forge
