// Acceptance gate: runs the eight validation checks at full scale and prints
// one PASS/FAIL line per criterion. Exit status 0 only if every line passes.

#include <cstdio>

#include "relaysec/validation.hpp"

int main() {
    std::printf("running acceptance checks (full scale, seed 1)...\n");
    std::fflush(stdout);

    const auto results = relaysec::run_acceptance();

    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %s  margin=%.4g  %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.margin, r.detail.c_str());
        std::fflush(stdout);
        all = all && r.passed;
    }
    std::printf(all ? "acceptance: all criteria passed\n" : "acceptance: FAILURES\n");
    return all ? 0 : 1;
}
