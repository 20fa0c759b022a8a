#include "otda/pipeline.hpp"

namespace otda {

namespace {

Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.points = Matrix(rows.size(), ds.dim());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < ds.dim(); ++k)
      out.points(r, k) = ds.points(rows[r], k);
  if (ds.has_labels()) {
    out.labels.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      out.labels[r] = ds.labels[rows[r]];
  }
  return out;
}

}  // namespace

PipelineResult open_set_adapt(const Dataset& source, const Dataset& target,
                              const PipelineConfig& cfg) {
  if (!source.has_labels())
    throw error(errc::invalid_input, "source dataset has no labels");
  RejectionConfig rc{cfg.eta, cfg.alpha, cfg.tol, cfg.max_iter,
                     cfg.literal_clamp};
  PipelineResult result;
  result.rejection = reject(source, target, rc, cfg.cost);
  const std::vector<std::size_t>& kept = result.rejection.kept_indices;
  if (kept.empty())
    throw error(errc::empty_survivor_set,
                "rejection removed every target sample; nothing to adapt");

  Dataset survivors = subset_rows(target, kept);
  DiscreteDistribution mu_t;
  if (cfg.marginal_mode == MarginalMode::learned) {
    mu_t.mass.resize(kept.size());
    double total = 0.0;
    for (std::size_t r = 0; r < kept.size(); ++r) {
      mu_t.mass[r] = result.rejection.mu_t_star[kept[r]];
      total += mu_t.mass[r];
    }
    for (double& m : mu_t.mass) m /= total;
  } else {
    mu_t = uniform_distribution(kept.size());
  }

  LabelShiftConfig lc{cfg.eta, cfg.tol, cfg.max_iter, cfg.strict_literal};
  result.labelshift = fit(source, survivors, mu_t, lc, cfg.cost);

  result.final_labels.assign(target.size(), kRejectLabel);
  for (std::size_t r = 0; r < kept.size(); ++r)
    result.final_labels[kept[r]] = result.labelshift.predicted_labels[r];
  result.nu = result.labelshift.nu;
  return result;
}

}  // namespace otda
