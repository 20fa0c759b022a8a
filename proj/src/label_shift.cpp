#include "otda/label_shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otda/kernels.hpp"

namespace otda {

ClassAssignmentOperator build_operator(const std::vector<int>& labels,
                                       std::size_t num_classes) {
  if (num_classes == 0)
    throw error(errc::invalid_parameter, "class count must be at least 1");
  if (labels.empty())
    throw error(errc::invalid_input, "label vector is empty");
  ClassAssignmentOperator op;
  op.class_counts.assign(num_classes, 0);
  op.row_class.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int y = labels[i];
    if (y < 1 || static_cast<std::size_t>(y) > num_classes)
      throw error(errc::invalid_input,
                  "label " + std::to_string(y) + " outside {1.." +
                      std::to_string(num_classes) + "}");
    op.row_class[i] = static_cast<std::size_t>(y - 1);
    ++op.class_counts[y - 1];
  }
  for (std::size_t c = 0; c < num_classes; ++c)
    if (op.class_counts[c] == 0)
      throw error(errc::invalid_input,
                  "class " + std::to_string(c + 1) +
                      " has no source samples (operator would be singular)");
  op.d = Matrix(labels.size(), num_classes, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i)
    op.d(i, op.row_class[i]) =
        1.0 / static_cast<double>(op.class_counts[op.row_class[i]]);
  return op;
}

std::vector<double> estimate_proportions(const Matrix& coupling,
                                         const ClassAssignmentOperator& op) {
  if (coupling.rows() != op.row_class.size())
    throw error(errc::invalid_input,
                "coupling rows (" + std::to_string(coupling.rows()) +
                    ") do not match operator rows (" +
                    std::to_string(op.row_class.size()) + ")");
  std::vector<double> nu(op.class_counts.size(), 0.0);
  for (std::size_t i = 0; i < coupling.rows(); ++i) {
    const double* ci = coupling.row(i);
    double rowsum = 0.0;
    for (std::size_t j = 0; j < coupling.cols(); ++j) rowsum += ci[j];
    nu[op.row_class[i]] += rowsum;
  }
  return nu;
}

namespace {

Matrix class_mass(const Matrix& coupling, const ClassAssignmentOperator& op) {
  std::size_t num_classes = op.class_counts.size(), m = coupling.cols();
  Matrix mass(num_classes, m, 0.0);
  for (std::size_t i = 0; i < coupling.rows(); ++i) {
    const double* ci = coupling.row(i);
    double* mc = mass.row(op.row_class[i]);
    for (std::size_t j = 0; j < m; ++j) mc[j] += ci[j];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    double inv = 1.0 / static_cast<double>(op.class_counts[c]);
    double* mc = mass.row(c);
    for (std::size_t j = 0; j < m; ++j) mc[j] *= inv;
  }
  return mass;
}

std::vector<int> argmax_labels(const Matrix& mass) {
  std::vector<int> labels(mass.cols());
  for (std::size_t j = 0; j < mass.cols(); ++j) {
    double best = 0.0;
    int pick = kUnassignedLabel;
    for (std::size_t c = 0; c < mass.rows(); ++c) {
      if (mass(c, j) > best) {
        best = mass(c, j);
        pick = static_cast<int>(c) + 1;
      }
    }
    labels[j] = pick;
  }
  return labels;
}

void check_finite(const std::vector<double>& v, std::size_t iter,
                  const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw error(errc::numerical_failure,
                  std::string("non-finite ") + what + " at iteration " +
                      std::to_string(iter));
}

}  // namespace

std::vector<int> predict_labels(const Matrix& coupling,
                                const ClassAssignmentOperator& op) {
  return argmax_labels(class_mass(coupling, op));
}

LabelShiftResult fit(const Dataset& source, const Dataset& target,
                     const DiscreteDistribution& mu_t,
                     const LabelShiftConfig& cfg,
                     const CostOptions& cost_opts) {
  if (!(cfg.eta > 0.0))
    throw error(errc::invalid_parameter,
                "eta must be positive (got " + std::to_string(cfg.eta) + ")");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1)
    throw error(errc::invalid_parameter, "tol must be positive and max_iter >= 1");
  if (!source.has_labels())
    throw error(errc::invalid_input, "source dataset has no labels");
  CostMatrix cost = cost_matrix(source, target, cost_opts);
  std::size_t n = source.size(), m = target.size();
  if (mu_t.size() != m)
    throw error(errc::invalid_input,
                "target marginal length (" + std::to_string(mu_t.size()) +
                    ") does not match target size (" + std::to_string(m) + ")");
  validate_distribution(mu_t, "target marginal");

  // Densify the observed labels so sparse id sets keep the operator square.
  std::vector<int> classes(source.labels.begin(), source.labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::vector<int> dense(n);
  for (std::size_t i = 0; i < n; ++i)
    dense[i] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(),
                                                 source.labels[i]) -
                                classes.begin()) +
               1;
  std::size_t num_classes = classes.size();
  ClassAssignmentOperator op = build_operator(dense, num_classes);

  Matrix logk = detail::log_kernel(cost.values, cfg.eta);
  const auto& k = kern::ops();
  std::vector<double> lmu_t = detail::safe_log(mu_t.mass);

  std::vector<double> nu(num_classes, 1.0 / static_cast<double>(num_classes));
  std::vector<double> nu_raw = nu;
  std::vector<double> f(n, -1.0), g(m, 0.0);
  std::vector<double> rowlse(n), collse(m), mu_s(n), rowsum(n), colsum(m);

  // collse tracks colLSE(logK + f) for the current f.
  k.col_lse(logk.data(), n, m, f.data(), collse.data());

  double err = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  bool converged = false;
  while (iter < cfg.max_iter) {
    ++iter;
    // g <- log mu_t - log(K^T e^f)
    for (std::size_t j = 0; j < m; ++j) g[j] = lmu_t[j] - collse[j];
    // mu_s <- D nu, clamped up to the row bound e^{-1} sum_j K_ij e^{g_j}
    k.row_lse(logk.data(), n, m, g.data(), rowlse.data());
    for (std::size_t i = 0; i < n; ++i) {
      double base = nu[op.row_class[i]] /
                    static_cast<double>(op.class_counts[op.row_class[i]]);
      double bound = std::exp(rowlse[i] - 1.0);
      mu_s[i] = base < bound ? bound : base;
    }
    // f <- log mu_s - log(K e^g)
    for (std::size_t i = 0; i < n; ++i)
      f[i] = std::log(mu_s[i] < 1e-300 ? 1e-300 : mu_s[i]) - rowlse[i];
    check_finite(f, iter, "source potential");
    check_finite(g, iter, "target potential");

    // nu <- (D^T D)^{-1} D^T B(f,g) 1 = per-class row-mass sums
    for (std::size_t i = 0; i < n; ++i) rowsum[i] = f[i] + rowlse[i];
    k.vexp(rowsum.data(), rowsum.data(), n);
    std::fill(nu_raw.begin(), nu_raw.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) nu_raw[op.row_class[i]] += rowsum[i];
    if (cfg.strict_literal) {
      nu = nu_raw;
    } else {
      double total = 0.0;
      for (double v : nu_raw) total += v;
      for (std::size_t c = 0; c < num_classes; ++c) nu[c] = nu_raw[c] / total;
    }

    k.col_lse(logk.data(), n, m, f.data(), collse.data());
    for (std::size_t j = 0; j < m; ++j) colsum[j] = g[j] + collse[j];
    k.vexp(colsum.data(), colsum.data(), m);
    err = k.l1diff(rowsum.data(), mu_s.data(), n) +
          k.l1diff(colsum.data(), mu_t.mass.data(), m);
    if (err <= cfg.tol) {
      converged = true;
      break;
    }
  }

  LabelShiftResult result;
  {
    Matrix coupling(n, m);
    std::vector<double> buf(m);
    for (std::size_t i = 0; i < n; ++i) {
      const double* li = logk.row(i);
      for (std::size_t j = 0; j < m; ++j) buf[j] = f[i] + li[j] + g[j];
      k.vexp(buf.data(), coupling.row(i), m);
    }
    result.plan.coupling = std::move(coupling);
  }
  result.mass_by_class = class_mass(result.plan.coupling, op);
  result.predicted_labels = argmax_labels(result.mass_by_class);
  for (int& label : result.predicted_labels)
    if (label != kUnassignedLabel) label = classes[label - 1];
  result.plan.potentials = DualPotentials{std::move(f), std::move(g)};
  result.plan.marginal_error = err;
  result.plan.iterations = iter;
  result.plan.converged = converged;
  result.nu = std::move(nu);
  result.nu_raw = std::move(nu_raw);
  result.classes = std::move(classes);
  return result;
}

}  // namespace otda
