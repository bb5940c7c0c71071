#pragma once

// Small-N oracle checks run by `catqcf selftest`.

#include <string>
#include <vector>

namespace catqcf {

struct SelfCheck {
    std::string name;
    double error;
    double tolerance;
    bool passed() const { return error <= tolerance; }
};

std::vector<SelfCheck> run_selftest();

}  // namespace catqcf
