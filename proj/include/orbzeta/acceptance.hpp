#ifndef ORBZETA_ACCEPTANCE_HPP
#define ORBZETA_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace orbzeta {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::vector<std::string> notes;
};

// Runs the acceptance criteria, streaming one pass/fail line per criterion.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

} // namespace orbzeta

#endif
