#include "perslap/verify.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    perslap::verify::Options opt;
    if (argc > 1) opt.seed = std::stoull(argv[1]);
    const auto summary = perslap::verify::run_acceptance(opt);
    for (const auto& c : summary.criteria) {
        std::cout << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " -- " << c.detail
                  << '\n';
        for (const auto& n : c.notes) std::cout << "      " << n << '\n';
    }
    return summary.all_passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
