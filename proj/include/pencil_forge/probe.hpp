#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "pencil_forge/expr.hpp"

namespace pencil_forge {

/// Probe count from PENCIL_FORGE_PROBES, 100 when unset or invalid. 0 disables probing.
unsigned default_probe_count();

struct ProbeDisagreement {
    std::string expression;
    bool decided_zero = false;
};

/// Numeric safety oracle for is_zero: a zero decision must evaluate to 0 at
/// every probe point, a nonzero decision must evaluate nonzero somewhere.
/// Probe points are random rationals; points hitting a pole are redrawn.
class ZeroTestOracle {
public:
    explicit ZeroTestOracle(unsigned probes = default_probe_count(), std::uint64_t seed = 1);
    ~ZeroTestOracle();
    ZeroTestOracle(const ZeroTestOracle&) = delete;
    ZeroTestOracle& operator=(const ZeroTestOracle&) = delete;

    /// Registers this oracle as the process-wide zero-test observer.
    void install();
    void uninstall();

    /// Probes `e` against the decision; returns true when they agree.
    bool check(const Expr& e, bool decided_zero);

    unsigned probes() const { return probes_; }
    std::size_t decisions() const { return decisions_.load(); }
    std::size_t disagreements() const;
    std::vector<ProbeDisagreement> samples() const;

private:
    unsigned probes_;
    std::uint64_t seed_;
    bool installed_ = false;
    std::atomic<std::size_t> decisions_{0};
    mutable std::mutex mutex_;
    std::size_t disagreements_ = 0;
    std::vector<ProbeDisagreement> samples_;
};

}  // namespace pencil_forge
