// Runs every acceptance suite and prints one pass/fail line per criterion
// with the measured value against its pinned tolerance.

#include <cstdio>

#include "muskat/verify.hpp"

int main() {
    using namespace muskat;
    bool all = true;
    int criterion = 0;
    for (const auto& name : verify::suite_names()) {
        ++criterion;
        std::printf("[criterion %d: %s]\n", criterion, name.c_str());
        std::fflush(stdout);
        const auto r = verify::run_suite(name);
        std::fputs(verify::render(r).c_str(), stdout);
        std::fflush(stdout);
        all = all && r.all_pass();
    }
    std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed"
                            : "ACCEPTANCE: failures present");
    return all ? 0 : 1;
}
