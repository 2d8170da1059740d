#pragma once

#include <string>
#include <vector>

namespace macdonald::validate {

struct Check {
    std::string suite;
    std::string name;
    double value;      // worst residual over the check's grid
    double tolerance;
    bool pass;
};

// suite: specfun, zeros, levy, sausage or all. Unknown names throw DomainError.
std::vector<Check> run_suite(const std::string& suite);
const std::vector<std::string>& suite_names();

}  // namespace macdonald::validate
