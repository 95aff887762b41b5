#include <gtest/gtest.h>

#include <iostream>

#include "pencil_forge/probe.hpp"

namespace {

// Every is_zero decision made by any test is cross-checked numerically.
class ProbeEnvironment : public ::testing::Environment {
public:
    void SetUp() override { oracle_.install(); }
    void TearDown() override {
        oracle_.uninstall();
        for (const auto& s : oracle_.samples())
            std::cerr << "probe disagreement (decided " << (s.decided_zero ? "zero" : "nonzero") << "): " << s.expression
                      << "\n";
        EXPECT_EQ(oracle_.disagreements(), 0u) << "over " << oracle_.decisions() << " zero-test decisions";
    }

private:
    pencil_forge::ZeroTestOracle oracle_{pencil_forge::default_probe_count()};
};

}  // namespace

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::AddGlobalTestEnvironment(new ProbeEnvironment);
    return RUN_ALL_TESTS();
}
