#pragma once

#include <cstdint>
#include <vector>

#include "otda/types.hpp"

namespace otda {

enum class PositiveClass { common, rejected };

struct ConfusionTable {
  std::vector<int> labels;  // universe, in the given order
  std::vector<long long> tp, fp, fn;
};

// Per-class confusion counts against a fixed label universe. A prediction or
// ground-truth label outside the universe raises error(invalid_input).
ConfusionTable confusion(const std::vector<int>& predicted,
                         const std::vector<int>& truth,
                         const std::vector<int>& universe);

// 2TP / (2TP + FP + FN) over boolean rejection masks, with the designated
// positive class; 0 when the denominator is 0. Length mismatch raises
// error(invalid_input).
double f1_binary(const std::vector<std::uint8_t>& predicted_rejected,
                 const std::vector<std::uint8_t>& true_rejected,
                 PositiveClass positive);

// Unweighted mean of per-class F1 over the universe.
double f1_macro(const std::vector<int>& predicted,
                const std::vector<int>& truth,
                const std::vector<int>& universe);

// Mean of the two binary F1 scores (common and rejected positive); the
// summary metric for the rejection decision.
double rejection_macro_f1(const std::vector<std::uint8_t>& predicted_rejected,
                          const std::vector<std::uint8_t>& true_rejected);

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth);

}  // namespace otda
