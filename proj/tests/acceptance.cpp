// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include "d2dcache/verification/acceptance.hpp"

#include <chrono>
#include <iostream>

int main() {
    using namespace d2dcache::verification;
    const AcceptanceOptions options;
    int failures = 0;
    for (const auto& check : acceptance_checks(options)) {
        const auto start = std::chrono::steady_clock::now();
        const auto result = check();
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        std::cout << format_line(result) << " (" << took.count() << " s)" << std::endl;
        if (!result.passed) ++failures;
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed" : "acceptance FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
