#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tomokit {

// One measured quantity against its pinned bound.
struct CheckResult {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool at_least = false;  // true: value >= bound passes; false: value <= bound passes
    bool passed = false;
    std::string detail;
};

struct CriterionResult {
    int number = 0;
    std::string title;
    std::vector<CheckResult> checks;
    std::string error;  // set when the run threw
    double seconds = 0.0;

    bool passed() const;
};

constexpr int criterion_count = 13;

std::string criterion_title(int number);
CriterionResult run_criterion(int number);

// Named groups of criteria for the command line; "all" runs every criterion.
std::vector<std::string> suite_names();
std::vector<int> suite_criteria(const std::string& suite);

void print_table(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace tomokit
