#pragma once

#include <string>
#include <vector>

#include "nplab/lattice.hpp"

// polytopes exercised by the property tests
inline std::vector<std::vector<std::vector<long>>> test_polytopes() {
  return {
      {{2}},
      {{3}},
      {{2, 0}, {0, 3}},
      {{1, 0}, {1, 2}},
      {{1, 0}, {0, 1}},
      {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}},
      {{1, 1, 0}, {0, 1, 1}, {1, 0, 2}},
  };
}
