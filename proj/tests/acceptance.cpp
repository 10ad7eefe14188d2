// Acceptance battery: one PASS/FAIL line per check; exit status 0 iff all pass.
#include <cstdio>

#include "helikon/acceptance.hpp"
#include "helikon/parallel.hpp"

int main() {
    helikon::acceptance::Options opt;
    opt.threads = helikon::resolve_threads();
    int failed = 0;
    helikon::acceptance::run(opt, [&](const helikon::acceptance::CheckResult& r) {
        std::printf("[%s] criterion %2d (%s) %s | %s | %.2fs\n", r.passed ? "PASS" : "FAIL", r.criterion, r.group.c_str(),
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    });
    std::printf("%d check(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
