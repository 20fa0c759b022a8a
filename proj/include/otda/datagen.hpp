#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otda/types.hpp"

namespace otda {

struct MixtureSpec {
  Matrix means;                    // C x 2 class means
  double noise = 0.5;              // isotropic standard deviation
  std::vector<double> proportions; // simplex over C classes
  std::size_t n = 0;               // total sample count
  std::uint64_t seed = 0;
};

// C means equally spaced on a circle of the given radius, starting at 90
// degrees (for C=3: 90, 210, 330).
Matrix circle_means(std::size_t num_classes, double radius = 3.0);

// Per-class counts: round(n * p_c), then corrected toward the largest
// remainders until the counts sum to n.
std::vector<std::size_t> class_counts(std::size_t n,
                                      const std::vector<double>& proportions);

// Draws the mixture with one deterministic RNG stream per class
// (mt19937_64 seeded via a splitmix64 hash of spec.seed and the class index;
// normals from our own Box-Muller so results are platform-independent).
// Labels are 1..C in class-block order. A class whose count rounds to zero
// despite positive proportion appends a note to `warnings` (when non-null)
// instead of failing.
Dataset sample_mixture(const MixtureSpec& spec,
                       std::vector<std::string>* warnings = nullptr);

enum class ScheduleKind { forward, reverse };

// forward: p_c proportional to c (1-based), normalized; reverse: the same
// vector reversed. Requires C >= 2.
std::vector<double> unbalanced_schedule(std::size_t num_classes,
                                        ScheduleKind kind);

}  // namespace otda
