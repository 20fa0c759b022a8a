#pragma once

#include <vector>

#include "otda/label_shift.hpp"
#include "otda/rejection.hpp"
#include "otda/types.hpp"

namespace otda {

// Final label assigned to rejected target samples. Class ids are >= 1, so 0
// is free; kUnassignedLabel (-1) is still reserved for all-zero columns.
inline constexpr int kRejectLabel = 0;

enum class MarginalMode { uniform, learned };

struct PipelineConfig {
  double eta = 0.001;
  double alpha = 1.0;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  MarginalMode marginal_mode = MarginalMode::learned;
  bool literal_clamp = false;
  bool strict_literal = false;
  CostOptions cost;
};

struct PipelineResult {
  RejectionResult rejection;
  LabelShiftResult labelshift;   // over the surviving target samples
  std::vector<int> final_labels;  // length n_t; kRejectLabel where rejected
  std::vector<double> nu;         // estimated source class proportions
};

// Rejection, then label shift on the survivors with the same eta. In learned
// mode the rejection marginal is restricted to the survivors and renormalized
// to sum 1; in uniform mode the survivors get uniform mass. Throws
// error(empty_survivor_set) when every target sample is rejected.
PipelineResult open_set_adapt(const Dataset& source, const Dataset& target,
                              const PipelineConfig& cfg);

}  // namespace otda
