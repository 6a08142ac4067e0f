#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bumpdirac::cli {

struct InvariantCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;  // largest observed violation measure
  double limit = 0.0;
  std::size_t samples = 0;
};

// Randomized invariant suite over `samples` draws per check; deterministic for a fixed seed.
std::vector<InvariantCheck> run_invariant_suite(std::size_t samples, std::uint64_t seed);

}  // namespace bumpdirac::cli
