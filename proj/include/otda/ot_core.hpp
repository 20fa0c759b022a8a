#pragma once

#include <cstddef>

#include "otda/types.hpp"

namespace otda {

enum class CostMetric { euclidean, sqeuclidean };

struct CostOptions {
  CostMetric metric = CostMetric::euclidean;
  // Divide the whole matrix by its maximum entry (off by default).
  bool normalize = false;
};

// Pairwise cost matrix between source rows and target rows.
struct CostMatrix {
  Matrix values;
};

// values[i][j] = distance between source point i and target point j under
// opts.metric (Euclidean by default). Throws error(invalid_input) on a
// feature-dimension mismatch, naming both dimensions.
CostMatrix cost_matrix(const Dataset& source, const Dataset& target,
                       const CostOptions& opts = {});

// K = exp(-cost/eta), entries floored at the smallest positive normal double.
struct GibbsKernel {
  Matrix values;
  double eta = 0.0;
};

GibbsKernel gibbs_kernel(const CostMatrix& cost, double eta);

struct DualPotentials {
  std::vector<double> f;
  std::vector<double> g;
};

// coupling[i][j] = exp(f_i) * K_ij * exp(g_j)
Matrix scaled_coupling(const DualPotentials& potentials,
                       const GibbsKernel& kernel);

// H(gamma) = -sum gamma_ij log gamma_ij, with 0 log 0 = 0.
// Throws error(invalid_input) on a negative entry.
double entropy(const Matrix& coupling);

// ||gamma 1 - mu_s||_1 + ||gamma^T 1 - mu_t||_1
double marginal_error(const Matrix& coupling, const DiscreteDistribution& mu_s,
                      const DiscreteDistribution& mu_t);

struct TransportPlan {
  Matrix coupling;
  DualPotentials potentials;
  double marginal_error = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SinkhornConfig {
  double tol = 1e-6;
  std::size_t max_iter = 10000;
};

// Log-domain entropic Sinkhorn for fixed marginals. Non-convergence within
// max_iter is reported through the converged flag; non-finite potentials
// raise error(numerical_failure) naming the iteration.
TransportPlan sinkhorn(const DiscreteDistribution& mu_s,
                       const DiscreteDistribution& mu_t,
                       const CostMatrix& cost, double eta,
                       const SinkhornConfig& cfg = {});

namespace detail {

// log(smallest positive normal double); kernel entries are floored here
// before the solvers take logs.
double log_floor() noexcept;

// logK = -cost/eta with entries floored at log_floor().
Matrix log_kernel(const Matrix& cost, double eta);

// log(max(x, 1e-300)) applied elementwise; keeps -inf out of potentials.
std::vector<double> safe_log(const std::vector<double>& x);

}  // namespace detail

}  // namespace otda
