#include <filesystem>
#include <fstream>

#include "case_json.hpp"
#include "support.hpp"

using namespace pencil_forge;

namespace {

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("pencil_forge_json_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    std::filesystem::create_directories(dir);
    return dir;
}

Json minimal() {
    return Json::parse(R"({
        "name": "flat",
        "n": 2,
        "coordinates": ["u", "v"],
        "parameters": [],
        "metric": [["0", "1"], ["1", "0"]],
        "isometry": ["1", "0"],
        "epsilon": "1",
        "c": "0",
        "references": {}
    })");
}

}  // namespace

TEST(CaseJson, BuiltinRoundTrip) {
    for (const auto& record : builtin_cases()) {
        SCOPED_TRACE(record.name);
        const Json j = case_to_json(record);
        const CaseRecord back = case_from_json(j);
        EXPECT_EQ(case_to_json(back).dump(), j.dump());
        EXPECT_EQ(report_to_json(verify_case(back), false).dump(),
                  report_to_json(verify_case(record), false).dump());
    }
}

TEST(CaseJson, FileRoundTripIsByteIdentical) {
    const auto dir = scratch_dir();
    const CaseRecord record = *find_builtin("g4");
    write_case_file(record, dir / "a.json");
    write_case_file(read_case_file(dir / "a.json"), dir / "b.json");
    std::ifstream a(dir / "a.json"), b(dir / "b.json");
    const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_EQ(sa, sb);
    EXPECT_EQ(sa.back(), '\n');
    std::filesystem::remove_all(dir);
}

TEST(CaseJson, MinimalCase) {
    const CaseRecord r = case_from_json(minimal());
    EXPECT_EQ(r.name, "flat");
    EXPECT_TRUE(verify_case(r).valid());
}

TEST(CaseJson, SchemaErrors) {
    Json unknown = minimal();
    unknown["bogus"] = 1;
    EXPECT_THROW(case_from_json(unknown), SchemaError);

    Json missing = minimal();
    missing.erase("metric");
    EXPECT_THROW(case_from_json(missing), SchemaError);

    Json wrong_type = minimal();
    wrong_type["n"] = "two";
    EXPECT_THROW(case_from_json(wrong_type), SchemaError);

    Json nested = minimal();
    nested["references"]["recursion"] = Json::parse(R"({"matrix": [[{"dx": "1", "extra": "0"}]]})");
    EXPECT_THROW(case_from_json(nested), SchemaError);

    EXPECT_THROW(case_from_json(Json::array()), SchemaError);
}

TEST(CaseJson, FileErrors) {
    const auto dir = scratch_dir();
    EXPECT_THROW(read_case_file(dir / "missing.json"), FileError);
    std::ofstream(dir / "broken.json") << "{ \"name\": ";
    EXPECT_THROW(read_case_file(dir / "broken.json"), SchemaError);
    std::filesystem::remove_all(dir);
}

TEST(CaseJson, ReportShape) {
    const VerificationReport r = verify_case(*find_builtin("g6"));
    const Json j = report_to_json(r, false);
    EXPECT_EQ(j["name"], "g6");
    EXPECT_EQ(j["valid"], true);
    EXPECT_FALSE(j.contains("seconds"));
    ASSERT_TRUE(j["checks"].is_array());
    for (const auto& c : j["checks"]) {
        EXPECT_TRUE(c.contains("name"));
        EXPECT_TRUE(c.contains("status"));
        EXPECT_FALSE(c.contains("seconds"));
    }
    EXPECT_TRUE(report_to_json(r, true).contains("seconds"));
}

TEST(CaseJson, RecursionText) {
    const LoadedCase lc = load_case(*find_builtin("g6"));
    const RecursionOperator r = recursion_operator(lc.eta, lc.op(), lc.ctx);
    EXPECT_EQ(recursion_to_text(r),
              "[ beta*dx + dx^-1  | alpha*dx + dx^-1 ]\n"
              "[ gamma*dx + dx^-1 | beta*dx + dx^-1 ] * dx^-1\n");
    const Json j = recursion_to_json(r);
    EXPECT_EQ(j[0][0]["dx"], "beta");
    EXPECT_EQ(j[0][0]["text"], "beta*dx + dx^-1");
}
