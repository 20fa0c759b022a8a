#include "otda/rejection.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "otda/kernels.hpp"

namespace otda {

double threshold(double eta, double alpha, std::size_t n_s, std::size_t n_t) {
  if (!(eta > 0.0) || !(alpha > 0.0) || n_s == 0 || n_t == 0)
    throw error(errc::invalid_parameter,
                "threshold requires eta > 0, alpha > 0 and nonempty datasets");
  return alpha * eta / static_cast<double>(n_s + n_t);
}

namespace {

void validate_config(const RejectionConfig& cfg) {
  if (!(cfg.eta > 0.0))
    throw error(errc::invalid_parameter,
                "eta must be positive (got " + std::to_string(cfg.eta) + ")");
  if (!(cfg.alpha > 0.0))
    throw error(errc::invalid_parameter,
                "alpha must be positive (got " + std::to_string(cfg.alpha) + ")");
  if (!(cfg.tol > 0.0))
    throw error(errc::invalid_parameter, "tol must be positive");
  if (cfg.max_iter < 1)
    throw error(errc::invalid_parameter, "max_iter must be at least 1");
}

void check_finite(const std::vector<double>& v, std::size_t iter,
                  const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw error(errc::numerical_failure,
                  std::string("non-finite ") + what + " at iteration " +
                      std::to_string(iter));
}

Matrix materialize(const Matrix& logk, const std::vector<double>& f,
                   const std::vector<double>& g) {
  std::size_t n = logk.rows(), m = logk.cols();
  Matrix coupling(n, m);
  std::vector<double> buf(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = logk.row(i);
    for (std::size_t j = 0; j < m; ++j) buf[j] = f[i] + li[j] + g[j];
    kern::ops().vexp(buf.data(), coupling.row(i), m);
  }
  return coupling;
}

}  // namespace

RejectionResult reject(const Dataset& source, const Dataset& target,
                       const RejectionConfig& cfg,
                       const CostOptions& cost_opts) {
  validate_config(cfg);
  CostMatrix cost = cost_matrix(source, target, cost_opts);
  std::size_t n = source.size(), m = target.size();
  double lambda = threshold(cfg.eta, cfg.alpha, n, m);

  Matrix logk = detail::log_kernel(cost.values, cfg.eta);
  const auto& k = kern::ops();
  const double lmu_s = -std::log(static_cast<double>(n));  // uniform source

  std::vector<double> f(n, 0.0), g(m, -1.0);
  std::vector<double> mu_t(m, 1.0 / static_cast<double>(m));
  std::vector<double> rowlse(n), collse(m), rowsum(n), mu_s(n, 1.0 / static_cast<double>(n));
  // Column log-mass of the raw kernel, for the pseudocode's literal bound.
  std::vector<double> colmass0;
  if (cfg.literal_clamp) {
    colmass0.resize(m);
    k.col_lse(logk.data(), n, m, nullptr, colmass0.data());
  }

  double err = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  bool converged = false;
  while (iter < cfg.max_iter) {
    ++iter;
    // f <- log mu_s - log(K e^g)
    k.row_lse(logk.data(), n, m, g.data(), rowlse.data());
    for (std::size_t i = 0; i < n; ++i) f[i] = lmu_s - rowlse[i];
    // mu_t <- B(f,g)^T 1, clamped from above
    k.col_lse(logk.data(), n, m, f.data(), collse.data());
    for (std::size_t j = 0; j < m; ++j) {
      double mass = std::exp(g[j] + collse[j]);
      double bound = cfg.literal_clamp ? std::exp(g[j] - 1.0 + colmass0[j])
                                       : std::exp(collse[j] - 1.0);
      mu_t[j] = mass > bound ? bound : mass;
    }
    // g <- log mu_t - log(K^T e^f)
    for (std::size_t j = 0; j < m; ++j)
      g[j] = std::log(mu_t[j] < 1e-300 ? 1e-300 : mu_t[j]) - collse[j];
    check_finite(f, iter, "source potential");
    check_finite(g, iter, "target potential");

    k.row_lse(logk.data(), n, m, g.data(), rowlse.data());
    for (std::size_t i = 0; i < n; ++i) rowsum[i] = f[i] + rowlse[i];
    k.vexp(rowsum.data(), rowsum.data(), n);
    err = k.l1diff(rowsum.data(), mu_s.data(), n);
    // Column sums equal mu_t by the g-update; include the residual anyway.
    for (std::size_t j = 0; j < m; ++j)
      err += std::fabs(std::exp(g[j] + collse[j]) - mu_t[j]);
    if (err <= cfg.tol) {
      converged = true;
      break;
    }
  }

  RejectionResult result;
  // Returned marginal: column sums of the final plan. collse still matches the
  // final f (f is not updated after it inside the loop), so these coincide
  // with the clamped working vector right after the g-update.
  result.mu_t_star.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    result.mu_t_star[j] = std::exp(g[j] + collse[j]);
  result.threshold = lambda;
  result.rejected.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    result.rejected[j] = result.mu_t_star[j] <= lambda ? 1 : 0;
  for (std::size_t j = 0; j < m; ++j)
    if (!result.rejected[j]) result.kept_indices.push_back(j);
  result.plan.coupling = materialize(logk, f, g);
  result.plan.potentials = DualPotentials{std::move(f), std::move(g)};
  result.plan.marginal_error = err;
  result.plan.iterations = iter;
  result.plan.converged = converged;
  return result;
}

KktReport kkt_report(const RejectionResult& result) {
  const Matrix& coupling = result.plan.coupling;
  const std::vector<double>& g = result.plan.potentials.g;
  std::size_t n = coupling.rows(), m = coupling.cols();
  KktReport report;
  report.g_max = -std::numeric_limits<double>::infinity();
  for (double v : g)
    if (v > report.g_max) report.g_max = v;
  double mu_s = 1.0 / static_cast<double>(n);
  report.f_residual = 0.0;
  report.lemma2_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ci = coupling.row(i);
    double rowsum = 0.0, lemma2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      rowsum += ci[j];
      lemma2 += ci[j] * (1.0 + g[j]);
    }
    double res = std::fabs(std::log(rowsum / mu_s));
    if (res > report.f_residual) report.f_residual = res;
    if (lemma2 > report.lemma2_residual) report.lemma2_residual = lemma2;
  }
  return report;
}

}  // namespace otda
