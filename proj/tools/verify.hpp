#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace affop {

struct VerifyOptions {
    std::optional<std::string> type;  // restricts multi-type criteria to this type when it is one of theirs
    int grade_cap = 99;               // caps every grade bound
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool known_failure = false;  // unattainable as stated; analysed in the README
    std::string detail;
};

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt, const std::function<void(const CriterionResult&)>& on_result = {});
std::string format_result(const CriterionResult& r);

}  // namespace affop
