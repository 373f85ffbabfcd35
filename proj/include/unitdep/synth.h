#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unitdep/problem.h"

namespace unitdep {

// Template-generated word problems with gold answer, tree and rate labels.
// Families: same-unit addition/subtraction, comparison, rate times count,
// total divided by rate, (a ± b) ÷ r and (a + b) × r, distractor quantities
// with a different unit, and questions asking for a rate. Each problem draws
// its words from one of two disjoint vocabularies, chosen by index parity.
// Deterministic in (seed, size). Throws std::invalid_argument if size < 50.
std::vector<Problem> generate_corpus(std::uint64_t seed, std::size_t size);

// The family name is the id prefix, e.g. "distractor-0042".
std::string problem_family(const Problem& problem);

// Problems with an unused quantity or a gold rate vertex.
bool in_distractor_rate_subset(const Problem& problem);

}  // namespace unitdep
