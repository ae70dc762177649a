// Acceptance run: one line per criterion, details for failures.
// Usage: acceptance [id...]   (default: all twelve)

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "qwalk/checks.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= qwalk::kCriterionCount; ++i) ids.push_back(i);

    int failed = 0;
    std::vector<qwalk::CriterionReport> reports;
    for (int id : ids) {
        reports.push_back(qwalk::run_criterion(id));
        const auto& r = reports.back();
        std::printf("%s\n", r.summary().c_str());
        std::fflush(stdout);
        if (!r.pass()) ++failed;
    }
    std::printf("\ndetails\n");
    for (const auto& r : reports) {
        std::printf("criterion %d: %s\n", r.id, r.title.c_str());
        for (const auto& it : r.items)
            std::printf("  %s %s: %s\n", it.info ? "info" : (it.pass ? "ok  " : "FAIL"), it.name.c_str(), it.detail.c_str());
    }
    std::printf("\n%zu criteria, %d failed\n", reports.size(), failed);
    return failed == 0 ? 0 : 1;
}
