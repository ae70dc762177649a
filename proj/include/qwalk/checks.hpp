#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qwalk {

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
    bool info = false;  // reported, never gating
};

struct CriterionReport {
    int id = 0;
    std::string title;
    std::vector<CheckItem> items;
    double seconds = 0.0;
    bool pass() const;
    std::string summary() const;  // "[PASS] 3 title (1.2 s)" plus failing item names
};

constexpr int kCriterionCount = 12;
std::string criterion_title(int id);
// any exception inside a check is turned into a failing item
CriterionReport run_criterion(int id);

// exp(A) by scaling and squaring with a Taylor core; independent of any eigendecomposition
Eigen::MatrixXcd expm_oracle(const Eigen::MatrixXcd& a);

}  // namespace qwalk
