#include "otda/model_selection.hpp"

#include <string>

namespace otda {

Grid default_grid() {
  return Grid{{0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0}, {0.1, 1.0, 10.0}};
}

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

SelectionReport reverse_validate(const Dataset& source, const Dataset& target,
                                 const Grid& grid,
                                 const ReverseValidationConfig& cfg) {
  if (grid.etas.empty() || grid.alphas.empty())
    throw error(errc::invalid_parameter, "grid must be nonempty");
  for (double e : grid.etas)
    if (!(e > 0.0))
      throw error(errc::invalid_parameter,
                  "grid eta must be positive (got " + std::to_string(e) + ")");
  for (double a : grid.alphas)
    if (!(a > 0.0))
      throw error(errc::invalid_parameter,
                  "grid alpha must be positive (got " + std::to_string(a) + ")");
  validate_dataset(source, "source");
  validate_dataset(target, "target");

  std::size_t n_s = source.size();
  SelectionReport report;
  report.inverted = cfg.invert;
  for (double eta : grid.etas) {
    for (double alpha : grid.alphas) {
      ConfigScore row;
      row.eta = eta;
      row.alpha = alpha;
      row.lambda = threshold(eta, alpha, n_s, target.size());
      RejectionConfig rc{eta, alpha, cfg.tol, cfg.max_iter, cfg.literal_clamp};
      RejectionResult forward = reject(source, target, rc, cfg.cost);
      row.forward_rejected = target.size() - forward.kept_indices.size();
      if (forward.kept_indices.empty()) {
        row.degenerate = true;
        row.score = 0.0;
      } else {
        Dataset survivors = subset_rows(target, forward.kept_indices);
        RejectionResult backward = reject(survivors, source, rc, cfg.cost);
        std::size_t low = 0;
        for (double mass : backward.mu_t_star)
          if (mass <= row.lambda) ++low;
        row.backward_low = low;
        row.score = static_cast<double>(low) / static_cast<double>(n_s);
      }
      report.scores.push_back(row);
    }
  }

  const ConfigScore* best = nullptr;
  for (const ConfigScore& row : report.scores) {
    if (row.degenerate) continue;
    if (!best) {
      best = &row;
      continue;
    }
    bool better = cfg.invert ? row.score < best->score : row.score > best->score;
    bool tie = row.score == best->score &&
               (row.eta < best->eta ||
                (row.eta == best->eta && row.alpha < best->alpha));
    if (better || tie) best = &row;
  }
  if (!best)
    throw error(errc::numerical_failure,
                "every grid configuration rejected all target samples");
  report.chosen_eta = best->eta;
  report.chosen_alpha = best->alpha;
  return report;
}

}  // namespace otda
