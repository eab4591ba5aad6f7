#pragma once

// Randomized checks of the abstraction-arithmetic lemmas over a spread of
// parameter sets. Each check counts the cases whose premise held and the
// cases where the conclusion then failed.

#include "bvh/abstraction.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bvh {

struct LemmaCheck {
    std::string name;
    uint64_t cases = 0;     // premise held
    uint64_t vacuous = 0;   // samples drawn whose premise did not hold
    uint64_t failures = 0;
    std::string first_failure;
};

// k=3 full and reduced for m = 3..5, general k = 4, 5 with toy factors for m = 3..5
std::vector<AbstractionParams> lemma_suite_params();

// names in run order
std::vector<std::string> lemma_names();

LemmaCheck run_lemma(const std::string& name, int cases, uint64_t seed);
std::vector<LemmaCheck> run_lemma_suite(int cases_per_lemma, uint64_t seed);

}  // namespace bvh
