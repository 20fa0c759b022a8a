#pragma once

#include <cstdint>
#include <vector>

#include "otda/ot_core.hpp"
#include "otda/types.hpp"

namespace otda {

struct RejectionConfig {
  double eta = 0.1;
  double alpha = 1.0;  // threshold multiplier
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  // Use the pseudocode's clamp bound e^{g_j-1} sum_i K_ij instead of the
  // KKT-consistent bound e^{-1} sum_i K_ij e^{f_i} (see kkt_report).
  bool literal_clamp = false;
};

struct RejectionResult {
  TransportPlan plan;
  // Learned target mass (column sums of the final plan); not necessarily
  // normalized after clamping.
  std::vector<double> mu_t_star;
  double threshold = 0.0;  // lambda
  std::vector<std::uint8_t> rejected;  // mu_t_star[j] <= lambda
  std::vector<std::size_t> kept_indices;
};

// lambda = alpha * eta / (n_s + n_t); all arguments must be positive.
double threshold(double eta, double alpha, std::size_t n_s, std::size_t n_t);

// Jointly learns a transport plan and the target marginal with a uniform
// source marginal, then flags target samples whose learned mass falls at or
// below the threshold. Non-convergence is reported via plan.converged.
RejectionResult reject(const Dataset& source, const Dataset& target,
                       const RejectionConfig& cfg,
                       const CostOptions& cost_opts = {});

// Optimality diagnostics evaluated on a rejection result alone (the source
// marginal is uniform by construction).
struct KktReport {
  double g_max = 0.0;            // max_j g_j; must be <= -1 at an optimum
  double f_residual = 0.0;       // max_i |log((gamma 1)_i / mu_s_i)|
  double lemma2_residual = 0.0;  // max_i sum_j gamma_ij (1 + g_j); must be <= 0
  bool pass(double tol_g = 1e-6, double tol_f = 1e-8,
            double tol_lemma2 = 1e-8) const {
    return g_max <= -1.0 + tol_g && f_residual <= tol_f &&
           lemma2_residual <= tol_lemma2;
  }
};

KktReport kkt_report(const RejectionResult& result);

}  // namespace otda
