#include "pencil_forge/probe.hpp"

#include <cstdlib>
#include <map>
#include <random>

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

unsigned default_probe_count() {
    if (const char* env = std::getenv("PENCIL_FORGE_PROBES")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 0) return static_cast<unsigned>(n);
    }
    return 100;
}

ZeroTestOracle::ZeroTestOracle(unsigned probes, std::uint64_t seed) : probes_(probes), seed_(seed) {}

ZeroTestOracle::~ZeroTestOracle() { uninstall(); }

void ZeroTestOracle::install() {
    set_zero_test_observer([this](const Expr& e, bool zero) { check(e, zero); });
    installed_ = true;
}

void ZeroTestOracle::uninstall() {
    if (installed_) set_zero_test_observer({});
    installed_ = false;
}

bool ZeroTestOracle::check(const Expr& e, bool decided_zero) {
    const std::size_t index = decisions_.fetch_add(1);
    std::mt19937_64 rng(seed_ * 0x9e3779b97f4a7c15ULL + index);
    std::uniform_int_distribution<long> num(-97, 97);
    std::uniform_int_distribution<long> den(1, 31);
    const std::vector<Var> vars = e.variables();

    bool any_nonzero = false;
    bool any_zero_violation = false;
    for (unsigned p = 0; p < probes_; ++p) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            std::map<Var, mpq_class> point;
            for (Var v : vars) {
                long a = num(rng);
                if (a == 0) a = 1;
                mpq_class q(a, den(rng));
                q.canonicalize();
                point.emplace(v, q);
            }
            try {
                if (!evaluate(e, point).is_zero()) {
                    any_nonzero = true;
                    if (decided_zero) any_zero_violation = true;
                }
                break;
            } catch (const DivisionByZeroError&) {
            }
        }
        if (any_zero_violation || (!decided_zero && any_nonzero)) break;
    }

    const bool agree = decided_zero ? !any_zero_violation : any_nonzero;
    if (!agree) {
        std::lock_guard lock(mutex_);
        ++disagreements_;
        if (samples_.size() < 16) samples_.push_back({render(e), decided_zero});
    }
    return agree;
}

std::size_t ZeroTestOracle::disagreements() const {
    std::lock_guard lock(mutex_);
    return disagreements_;
}

std::vector<ProbeDisagreement> ZeroTestOracle::samples() const {
    std::lock_guard lock(mutex_);
    return samples_;
}

}  // namespace pencil_forge
