#pragma once

#include <cstddef>
#include <vector>

#include "otda/ot_core.hpp"
#include "otda/types.hpp"

namespace otda {

// Sentinel prediction for a target column whose class mass is all zero.
inline constexpr int kUnassignedLabel = -1;

// D: n_s x C with d_ic = 1/n_s^c when y_i = c, else 0.
struct ClassAssignmentOperator {
  Matrix d;
  std::vector<std::size_t> class_counts;  // n_s^c, length C
  std::vector<std::size_t> row_class;     // 0-based class index per source row
};

// Labels must lie in {1..C} and every class must be represented; an empty
// class raises error(invalid_input) naming it (D^T D would be singular).
ClassAssignmentOperator build_operator(const std::vector<int>& labels,
                                       std::size_t num_classes);

// nu_c = total coupling mass in rows of class c; the closed form of
// (D^T D)^{-1} D^T gamma 1 since D^T D is diagonal.
std::vector<double> estimate_proportions(const Matrix& coupling,
                                         const ClassAssignmentOperator& op);

// Per target column, argmax over classes of (D^T gamma)_{cj}; ties break
// toward the smallest class id; an all-zero column gets kUnassignedLabel.
// Returned labels are 1-based class ids.
std::vector<int> predict_labels(const Matrix& coupling,
                                const ClassAssignmentOperator& op);

struct LabelShiftConfig {
  double eta = 0.001;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  // Keep the pseudocode's unnormalized proportion update. The clamp makes nu
  // non-decreasing coordinatewise, so without renormalization the total mass
  // inflates and the loop cannot meet tol; the default projects nu back onto
  // the simplex after each update, which preserves the argmax predictions.
  bool strict_literal = false;
};

struct LabelShiftResult {
  TransportPlan plan;
  std::vector<double> nu;         // class proportions, indexed like classes
  std::vector<double> nu_raw;     // last unnormalized update (D^T D)^{-1} D^T gamma 1
  std::vector<int> classes;       // distinct source labels, ascending
  std::vector<int> predicted_labels;  // original label ids, or kUnassignedLabel
  Matrix mass_by_class;           // D^T gamma, C x n_t
};

// Learns the plan and source class proportions for a fixed target marginal,
// then predicts target labels. Source labels may be any set of distinct
// positive ids; they are densified internally and mapped back.
LabelShiftResult fit(const Dataset& source, const Dataset& target,
                     const DiscreteDistribution& mu_t,
                     const LabelShiftConfig& cfg,
                     const CostOptions& cost_opts = {});

}  // namespace otda
