// Acceptance gate. Runs every criterion in the battery and prints one
// PASS/FAIL line per criterion, then a summary. Exit 0 iff all pass.
//
// Usage: acceptance [smoke|full] [seed]
//
// The default is the smoke suite at a fixed seed so that CI runs are
// reproducible. The full suite widens the randomized sweeps.

#include <quclone/acceptance.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    using namespace quclone;

    Suite suite = Suite::smoke;
    std::uint64_t seed = 20260815ull;

    if (argc > 1) {
        const std::string arg = argv[1];
        if (arg == "full") {
            suite = Suite::full;
        } else if (arg != "smoke") {
            std::fprintf(stderr, "usage: acceptance [smoke|full] [seed]\n");
            return 2;
        }
    }
    if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);

    BatteryReport report;
    try {
        report = run_battery(suite, seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: battery aborted: %s\n", e.what());
        return 1;
    }

    for (const auto& criterion : report.criteria)
        std::printf("%s\n", format_criterion_line(criterion).c_str());

    std::printf("%s: %zu/%zu criteria passed (%s suite, seed %llu, %.1fs)\n",
                report.all_pass ? "PASS" : "FAIL",
                static_cast<std::size_t>(
                    std::count_if(report.criteria.begin(), report.criteria.end(),
                                  [](const CriterionOutcome& c) { return c.pass; })),
                report.criteria.size(),
                suite == Suite::full ? "full" : "smoke",
                static_cast<unsigned long long>(seed),
                report.wall_seconds);

    return report.all_pass ? 0 : 1;
}
