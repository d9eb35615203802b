// Acceptance suite: runs the verification criteria and prints one PASS/FAIL
// line per criterion with the measured values. With no arguments all ten
// criteria run; `--criterion N` runs a single one. Exit code is the number
// of failed criteria.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "qpulse/verify.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            ids = {std::atoi(argv[i + 1])};
            ++i;
        } else if (std::strcmp(argv[i], "--suite") == 0 && i + 1 < argc) {
            ids = qpulse::suite_criteria(argv[i + 1]);
            ++i;
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N | --suite NAME]\n", argv[0]);
            return 64;
        }
    }
    int failures = 0;
    for (const int id : ids) {
        const qpulse::CriterionResult r = qpulse::run_criterion(id);
        std::printf("[%s] %2d %s: %s (%.2fs, budget %.0fs)\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                    r.runtime_s, r.budget_s);
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    return failures;
}
