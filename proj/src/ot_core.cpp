#include "otda/ot_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "otda/kernels.hpp"

namespace otda {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::invalid_input: return "invalid-input";
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::numerical_failure: return "numerical-failure";
    case errc::parse_error: return "parse-error";
    case errc::io_error: return "io-error";
    case errc::empty_survivor_set: return "empty-survivor-set";
  }
  return "unknown";
}

void validate_dataset(const Dataset& ds, const std::string& name) {
  if (ds.size() == 0)
    throw error(errc::invalid_input, name + " dataset is empty");
  if (ds.dim() == 0)
    throw error(errc::invalid_input, name + " dataset has zero feature dimension");
  const double* p = ds.points.data();
  for (std::size_t i = 0; i < ds.points.size(); ++i)
    if (!std::isfinite(p[i]))
      throw error(errc::invalid_input, name + " dataset has a non-finite feature");
  if (ds.has_labels() && ds.labels.size() != ds.size())
    throw error(errc::invalid_input,
                name + " dataset has " + std::to_string(ds.labels.size()) +
                    " labels for " + std::to_string(ds.size()) + " rows");
}

DiscreteDistribution uniform_distribution(std::size_t n) {
  return DiscreteDistribution{std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

void validate_distribution(const DiscreteDistribution& mu,
                           const std::string& name) {
  double sum = 0.0;
  for (double m : mu.mass) {
    if (!(m >= 0.0))
      throw error(errc::invalid_input, name + " has a negative mass entry");
    sum += m;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw error(errc::invalid_input,
                name + " must sum to 1 (sum = " + std::to_string(sum) + ")");
}

CostMatrix cost_matrix(const Dataset& source, const Dataset& target,
                       const CostOptions& opts) {
  validate_dataset(source, "source");
  validate_dataset(target, "target");
  if (source.dim() != target.dim())
    throw error(errc::invalid_input,
                "feature dimension mismatch: source d=" +
                    std::to_string(source.dim()) + ", target d=" +
                    std::to_string(target.dim()));
  std::size_t n = source.size(), m = target.size();
  Matrix values(n, m);
  kern::ops().pairwise_sqdist(source.points.data(), n, target.points.data(), m,
                              source.dim(), values.data());
  if (opts.metric == CostMetric::euclidean) {
    double* v = values.data();
    for (std::size_t i = 0; i < values.size(); ++i) v[i] = std::sqrt(v[i]);
  }
  if (opts.normalize) {
    double mx = kern::ops().vmax(values.data(), values.size());
    if (mx > 0.0) {
      double* v = values.data();
      for (std::size_t i = 0; i < values.size(); ++i) v[i] /= mx;
    }
  }
  return CostMatrix{std::move(values)};
}

GibbsKernel gibbs_kernel(const CostMatrix& cost, double eta) {
  if (!(eta > 0.0))
    throw error(errc::invalid_parameter,
                "eta must be positive (got " + std::to_string(eta) + ")");
  Matrix values(cost.values.rows(), cost.values.cols());
  const double* c = cost.values.data();
  double* v = values.data();
  std::size_t total = values.size();
  for (std::size_t i = 0; i < total; ++i) v[i] = -c[i] / eta;
  kern::ops().vexp(v, v, total);
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < total; ++i)
    if (v[i] < tiny) v[i] = tiny;
  return GibbsKernel{std::move(values), eta};
}

Matrix scaled_coupling(const DualPotentials& potentials,
                       const GibbsKernel& kernel) {
  std::size_t n = kernel.values.rows(), m = kernel.values.cols();
  if (potentials.f.size() != n || potentials.g.size() != m)
    throw error(errc::invalid_input,
                "potential lengths (" + std::to_string(potentials.f.size()) +
                    ", " + std::to_string(potentials.g.size()) +
                    ") do not match kernel " + std::to_string(n) + "x" +
                    std::to_string(m));
  Matrix coupling(n, m);
  std::vector<double> ef(n), eg(m);
  kern::ops().vexp(potentials.f.data(), ef.data(), n);
  kern::ops().vexp(potentials.g.data(), eg.data(), m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ki = kernel.values.row(i);
    double* ci = coupling.row(i);
    for (std::size_t j = 0; j < m; ++j) ci[j] = ef[i] * ki[j] * eg[j];
  }
  return coupling;
}

double entropy(const Matrix& coupling) {
  const double* v = coupling.data();
  double h = 0.0;
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    if (v[i] < 0.0)
      throw error(errc::invalid_input,
                  "entropy of a coupling with a negative entry");
    if (v[i] > 0.0) h -= v[i] * std::log(v[i]);
  }
  return h;
}

double marginal_error(const Matrix& coupling, const DiscreteDistribution& mu_s,
                      const DiscreteDistribution& mu_t) {
  std::size_t n = coupling.rows(), m = coupling.cols();
  if (mu_s.size() != n || mu_t.size() != m)
    throw error(errc::invalid_input,
                "marginal sizes (" + std::to_string(mu_s.size()) + ", " +
                    std::to_string(mu_t.size()) + ") do not match coupling " +
                    std::to_string(n) + "x" + std::to_string(m));
  std::vector<double> colsum(m, 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ci = coupling.row(i);
    double rowsum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      rowsum += ci[j];
      colsum[j] += ci[j];
    }
    err += std::fabs(rowsum - mu_s.mass[i]);
  }
  for (std::size_t j = 0; j < m; ++j) err += std::fabs(colsum[j] - mu_t.mass[j]);
  return err;
}

namespace detail {

double log_floor() noexcept {
  static const double v = std::log(std::numeric_limits<double>::min());
  return v;
}

Matrix log_kernel(const Matrix& cost, double eta) {
  Matrix logk(cost.rows(), cost.cols());
  const double* c = cost.data();
  double* l = logk.data();
  double floor = log_floor();
  for (std::size_t i = 0; i < cost.size(); ++i) {
    double v = -c[i] / eta;
    l[i] = v < floor ? floor : v;
  }
  return logk;
}

std::vector<double> safe_log(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::log(x[i] < 1e-300 ? 1e-300 : x[i]);
  return out;
}

}  // namespace detail

namespace {

void check_finite_potentials(const std::vector<double>& f,
                             const std::vector<double>& g, std::size_t iter) {
  for (double v : f)
    if (!std::isfinite(v))
      throw error(errc::numerical_failure,
                  "non-finite source potential at iteration " +
                      std::to_string(iter));
  for (double v : g)
    if (!std::isfinite(v))
      throw error(errc::numerical_failure,
                  "non-finite target potential at iteration " +
                      std::to_string(iter));
}

Matrix materialize_coupling(const Matrix& logk, const std::vector<double>& f,
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

TransportPlan sinkhorn(const DiscreteDistribution& mu_s,
                       const DiscreteDistribution& mu_t,
                       const CostMatrix& cost, double eta,
                       const SinkhornConfig& cfg) {
  if (!(eta > 0.0))
    throw error(errc::invalid_parameter,
                "eta must be positive (got " + std::to_string(eta) + ")");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1)
    throw error(errc::invalid_parameter, "tol must be positive and max_iter >= 1");
  std::size_t n = cost.values.rows(), m = cost.values.cols();
  if (mu_s.size() != n || mu_t.size() != m)
    throw error(errc::invalid_input,
                "marginal sizes (" + std::to_string(mu_s.size()) + ", " +
                    std::to_string(mu_t.size()) + ") do not match cost " +
                    std::to_string(n) + "x" + std::to_string(m));
  validate_distribution(mu_s, "source marginal");
  validate_distribution(mu_t, "target marginal");

  Matrix logk = detail::log_kernel(cost.values, eta);
  std::vector<double> lmu_s = detail::safe_log(mu_s.mass);
  std::vector<double> lmu_t = detail::safe_log(mu_t.mass);
  std::vector<double> f(n, 0.0), g(m, 0.0);
  std::vector<double> rowlse(n), collse(m), rowsum(n), colsum(m);
  const auto& k = kern::ops();

  double err = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  bool converged = false;
  while (iter < cfg.max_iter) {
    ++iter;
    k.row_lse(logk.data(), n, m, g.data(), rowlse.data());
    for (std::size_t i = 0; i < n; ++i) f[i] = lmu_s[i] - rowlse[i];
    k.col_lse(logk.data(), n, m, f.data(), collse.data());
    for (std::size_t j = 0; j < m; ++j) g[j] = lmu_t[j] - collse[j];
    check_finite_potentials(f, g, iter);

    k.row_lse(logk.data(), n, m, g.data(), rowlse.data());
    for (std::size_t i = 0; i < n; ++i) rowsum[i] = f[i] + rowlse[i];
    k.vexp(rowsum.data(), rowsum.data(), n);
    for (std::size_t j = 0; j < m; ++j) colsum[j] = g[j] + collse[j];
    k.vexp(colsum.data(), colsum.data(), m);
    err = k.l1diff(rowsum.data(), mu_s.mass.data(), n) +
          k.l1diff(colsum.data(), mu_t.mass.data(), m);
    if (err <= cfg.tol) {
      converged = true;
      break;
    }
  }

  TransportPlan plan;
  plan.coupling = materialize_coupling(logk, f, g);
  plan.potentials = DualPotentials{std::move(f), std::move(g)};
  plan.marginal_error = err;
  plan.iterations = iter;
  plan.converged = converged;
  return plan;
}

}  // namespace otda
