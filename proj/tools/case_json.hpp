#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pencil_forge/catalog.hpp"
#include "pencil_forge/errors.hpp"
#include "pencil_forge/hierarchy.hpp"

namespace pencil_forge {

using Json = nlohmann::ordered_json;

/// Case file that is not valid JSON or does not match the schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Missing or unwritable file.
class FileError : public Error {
public:
    using Error::Error;
};

Json case_to_json(const CaseRecord& record);
/// Throws SchemaError on unknown keys, missing required keys or wrong types.
CaseRecord case_from_json(const Json& j);

CaseRecord read_case_file(const std::filesystem::path& path);
void write_case_file(const CaseRecord& record, const std::filesystem::path& path);

Json report_to_json(const VerificationReport& report, bool timings);
std::string report_to_text(const VerificationReport& report, bool timings);

Json symbol_to_json(const OperatorSymbol& s);
Json recursion_to_json(const RecursionOperator& r);
/// Rows of "[ a, b ]" followed by "* dx^-1".
std::string recursion_to_text(const RecursionOperator& r);

}  // namespace pencil_forge
