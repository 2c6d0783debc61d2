// Runs every acceptance criterion and reports one PASS/FAIL line each.
#include <cstdio>

#include "vfe/acceptance.hpp"

int main() {
    std::vector<vfe::acceptance::CheckResult> results = vfe::acceptance::run_suite("all");
    int passed = 0;
    for (const auto& r : results) {
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        if (r.pass) ++passed;
    }
    std::printf("ACCEPTANCE: %d/%zu criteria passed\n", passed, results.size());
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}
