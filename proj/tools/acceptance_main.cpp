#include "verify.hpp"

#include <iostream>

int main() {
    int unexpected = 0, known = 0;
    affop::run_acceptance({}, [&](const affop::CriterionResult& r) {
        std::cout << affop::format_result(r) << std::endl;
        if (!r.pass) (r.known_failure ? known : unexpected)++;
    });
    std::cout << (unexpected ? "acceptance: unexpected failures: " + std::to_string(unexpected)
                             : "acceptance: no unexpected failures") << ", known failures: " << known << "\n";
    return unexpected ? 1 : 0;
}
