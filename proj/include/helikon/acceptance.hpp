#pragma once

#include <functional>
#include <string>
#include <vector>

namespace helikon::acceptance {

/// Deliberate faults for negative-control runs.
enum class Perturbation { none, quasi_factor_sign };

struct Options {
    /// Group names to run; empty runs everything.
    std::vector<std::string> only;
    Perturbation perturbation = Perturbation::none;
    unsigned threads = 1;
};

struct CheckResult {
    int criterion;
    std::string group;
    std::string name;
    bool passed;
    std::string detail;
    double seconds;
};

/// Group names in criterion order.
const std::vector<std::string>& groups();

/// Runs the battery; `on_result` is called as each check finishes.
std::vector<CheckResult> run(const Options& opt, const std::function<void(const CheckResult&)>& on_result = {});

Perturbation parse_perturbation(const std::string& name);

}  // namespace helikon::acceptance
