#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qhd::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct Options {
    std::string filter;          // substring match on criterion name (empty = all)
    std::uint64_t seed = 12345;  // drives every randomized criterion
};

// Runs the acceptance criteria in order, printing one PASS/FAIL line per
// criterion to `out` as results arrive.
std::vector<CriterionResult> run_acceptance(const Options& opts, std::ostream& out);

// 0 when every executed criterion passed, 1 otherwise.
int exit_code(const std::vector<CriterionResult>& results);

}  // namespace qhd::acceptance
