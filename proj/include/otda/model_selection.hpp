#pragma once

#include <cstddef>
#include <vector>

#include "otda/ot_core.hpp"
#include "otda/rejection.hpp"
#include "otda/types.hpp"

namespace otda {

struct Grid {
  std::vector<double> etas;
  std::vector<double> alphas;
};

// The search sets used for the synthetic and real experiments.
Grid default_grid();

struct ConfigScore {
  double eta = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  // #(backward-pass marginal entries <= lambda) / n_s; 0 for degenerate rows.
  double score = 0.0;
  std::size_t forward_rejected = 0;
  std::size_t backward_low = 0;
  // Forward pass rejected every target sample; backward pass skipped and the
  // row is excluded from selection.
  bool degenerate = false;
};

struct SelectionReport {
  std::vector<ConfigScore> scores;  // one row per (eta, alpha), grid order
  double chosen_eta = 0.0;
  double chosen_alpha = 0.0;
  bool inverted = false;
};

struct ReverseValidationConfig {
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  // Select the minimal score instead of the maximal one. The procedure's
  // score is stored in a variable named "errors" yet maximized; argmax is
  // implemented literally and this flag exposes the other reading.
  bool invert = false;
  bool literal_clamp = false;
  CostOptions cost;
};

// Scores every grid config by rejecting forward, swapping roles (surviving
// target becomes the new source), rejecting backward with the same lambda,
// and counting low-mass entries of the backward marginal. Ties break toward
// smaller eta, then smaller alpha, independent of grid order.
SelectionReport reverse_validate(const Dataset& source, const Dataset& target,
                                 const Grid& grid,
                                 const ReverseValidationConfig& cfg = {});

}  // namespace otda
