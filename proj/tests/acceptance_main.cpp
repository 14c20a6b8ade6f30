// Acceptance suite: one pass/fail line per criterion. Exit code 0 only when
// every criterion holds at its stated tolerance.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "slrc/bench.hpp"

int main() {
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "slrc_acceptance_work";
    fs::create_directories(work);

    const auto results = slrc::bench::run_all(work);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << slrc::bench::format_line(r) << "\n";
        std::cout.flush();
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "ACCEPTANCE: all criteria passed"
                           : "ACCEPTANCE: criteria FAILED")
              << "\n";
    return all_pass ? 0 : 1;
}
