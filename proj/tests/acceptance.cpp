// Acceptance run: one line per criterion, exit status 1 if any fails.
#include "cavbranch/selftest.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

int main()
{
    using namespace cavbranch;
    const auto suites = acceptance_suites();
    std::ostringstream log;
    const auto reports = run_suites(suites, default_routes(), log);
    int failed = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        failed += r.outcome.passed ? 0 : 1;
        std::printf("criterion %2zu %-22s %s  %s (%.2fs)\n", i + 1, r.name.c_str(),
                    r.outcome.passed ? "PASS" : "FAIL", r.outcome.detail.c_str(), r.seconds);
    }
    std::printf("%zu/%zu criteria passed\n", reports.size() - failed, reports.size());
    return failed == 0 ? 0 : 1;
}
