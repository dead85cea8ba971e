#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccsym/ring.hpp"

namespace ccs {

struct SuiteReport {
    std::string suite;
    std::string ring;
    std::uint64_t seed = 0;
    int instances = 0;
    int failed = 0;
    int nontrivial = 0;   // instances whose checked value is not 1 (or not 0 for additive checks)
    int max_degree = 0;   // reciprocity suites: largest residue degree of a site
    std::vector<std::string> failures;  // first few counterexamples

    bool pass() const { return instances > 0 && failed == 0; }
};

const std::vector<std::string>& suite_names();
// one line per suite: name and the rings it accepts
std::string suite_help();

// Randomized property battery; deterministic in (name, ring, trials, seed). DomainViolation
// when the ring does not fit the suite, Usage for unknown names.
SuiteReport run_suite(const std::string& name, RingPtr r, int trials, std::uint64_t seed);

}  // namespace ccs
