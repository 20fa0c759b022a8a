#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "otda/datagen.hpp"
#include "otda/io.hpp"
#include "otda/kernels.hpp"
#include "otda/label_shift.hpp"
#include "otda/metrics.hpp"
#include "otda/model_selection.hpp"
#include "otda/ot_core.hpp"
#include "otda/pipeline.hpp"
#include "otda/rejection.hpp"
#include "otda/types.hpp"

using nlohmann::ordered_json;

namespace {

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

struct SolverFlags {
  double eta = 0.1;
  double alpha = 1.0;
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  std::string metric = "euclidean";
  bool normalize_cost = false;
  std::string backend = "auto";
  bool literal_clamp = false;
  bool strict_literal = false;
};

struct DataFlags {
  std::string source_path, target_path;
  bool synthetic = false;
  std::size_t classes = 3;
  std::size_t n_per_class = 1000;
  double noise = 0.5;
  double radius = 3.0;
  std::string means_spec;
  std::vector<std::size_t> source_classes, target_classes;
  std::string source_props = "uniform";
  std::string target_props = "uniform";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

struct OutputFlags {
  std::string report_path, plan_path, plot_path;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags, bool with_alpha) {
  cmd->add_option("--eta", flags.eta, "entropic regularization");
  if (with_alpha)
    cmd->add_option("--alpha", flags.alpha, "threshold multiplier");
  cmd->add_option("--tol", flags.tol, "stopping tolerance");
  cmd->add_option("--max-iter", flags.max_iter, "iteration cap");
  cmd->add_option("--metric", flags.metric, "cost metric")
      ->check(CLI::IsMember({"euclidean", "sqeuclidean"}));
  cmd->add_flag("--normalize-cost", flags.normalize_cost,
                "divide the cost matrix by its maximum");
  cmd->add_option("--backend", flags.backend, "kernel backend")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--source", flags.source_path, "source dataset CSV");
  cmd->add_option("--target", flags.target_path, "target dataset CSV");
  cmd->add_flag("--synthetic", flags.synthetic,
                "draw Gaussian-mixture data instead of reading files");
  cmd->add_option("--classes", flags.classes, "number of mixture classes");
  cmd->add_option("--n-per-class", flags.n_per_class,
                  "samples per class before proportions");
  cmd->add_option("--noise", flags.noise, "mixture standard deviation");
  cmd->add_option("--radius", flags.radius, "circle radius for default means");
  cmd->add_option("--means", flags.means_spec,
                  "explicit class means, e.g. '0:0;6:0'");
  cmd->add_option("--source-classes", flags.source_classes,
                  "class ids present in the source")
      ->delimiter(',');
  cmd->add_option("--target-classes", flags.target_classes,
                  "class ids present in the target")
      ->delimiter(',');
  cmd->add_option("--source-props", flags.source_props,
                  "uniform|forward|reverse or comma list");
  cmd->add_option("--target-props", flags.target_props,
                  "uniform|forward|reverse or comma list");
  cmd->add_option("--trials", flags.trials, "number of synthetic trials");
  cmd->add_option("--seed", flags.seed, "base RNG seed");
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--report", flags.report_path, "JSON report path (stdout if absent)");
  cmd->add_option("--plan", flags.plan_path, "sparse coupling CSV path");
  cmd->add_option("--plot", flags.plot_path, "plot-data CSV path");
}

otda::CostOptions cost_options(const SolverFlags& flags) {
  otda::CostOptions opts;
  opts.metric = flags.metric == "sqeuclidean" ? otda::CostMetric::sqeuclidean
                                              : otda::CostMetric::euclidean;
  opts.normalize = flags.normalize_cost;
  return opts;
}

void apply_backend(const SolverFlags& flags) {
  if (flags.backend == "scalar")
    otda::kern::set_backend(otda::kern::Backend::scalar);
  else if (flags.backend == "avx2")
    otda::kern::set_backend(otda::kern::Backend::avx2);
}

std::vector<double> parse_props(const std::string& spec, std::size_t count) {
  if (spec == "uniform")
    return std::vector<double>(count, 1.0 / static_cast<double>(count));
  if (spec == "forward")
    return otda::unbalanced_schedule(count, otda::ScheduleKind::forward);
  if (spec == "reverse")
    return otda::unbalanced_schedule(count, otda::ScheduleKind::reverse);
  std::vector<double> props;
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ',')) props.push_back(std::stod(cell));
  if (props.size() != count)
    throw otda::error(otda::errc::invalid_parameter,
                      "expected " + std::to_string(count) +
                          " proportions, got " + std::to_string(props.size()));
  return props;
}

otda::Matrix parse_means(const std::string& spec, std::size_t classes,
                         double radius) {
  if (spec.empty()) return otda::circle_means(classes, radius);
  std::vector<std::pair<double, double>> pts;
  std::stringstream ss(spec);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    auto colon = pair.find(':');
    if (colon == std::string::npos)
      throw otda::error(otda::errc::invalid_parameter,
                        "means must look like 'x:y;x:y'");
    pts.emplace_back(std::stod(pair.substr(0, colon)),
                     std::stod(pair.substr(colon + 1)));
  }
  if (pts.size() != classes)
    throw otda::error(otda::errc::invalid_parameter,
                      "expected " + std::to_string(classes) + " means, got " +
                          std::to_string(pts.size()));
  otda::Matrix means(classes, 2);
  for (std::size_t c = 0; c < classes; ++c) {
    means(c, 0) = pts[c].first;
    means(c, 1) = pts[c].second;
  }
  return means;
}

// One synthetic domain: only `present` classes carry mass, proportioned by
// `props` over those classes in order.
otda::Dataset draw_domain(const DataFlags& data, const otda::Matrix& means,
                          const std::vector<std::size_t>& present,
                          const std::string& props_spec, std::uint64_t seed,
                          std::vector<std::string>* warnings) {
  std::vector<double> props = parse_props(props_spec, present.size());
  std::vector<double> full(data.classes, 0.0);
  for (std::size_t k = 0; k < present.size(); ++k) {
    std::size_t c = present[k];
    if (c < 1 || c > data.classes)
      throw otda::error(otda::errc::invalid_parameter,
                        "class id " + std::to_string(c) + " outside 1.." +
                            std::to_string(data.classes));
    full[c - 1] = props[k];
  }
  otda::MixtureSpec spec;
  spec.means = means;
  spec.noise = data.noise;
  spec.proportions = full;
  spec.n = data.n_per_class * present.size();
  spec.seed = seed;
  return otda::sample_mixture(spec, warnings);
}

struct TrialData {
  otda::Dataset source, target;
  std::vector<std::string> warnings;
};

TrialData load_trial(const DataFlags& data, std::size_t trial) {
  TrialData td;
  if (data.synthetic) {
    std::vector<std::size_t> sc = data.source_classes;
    std::vector<std::size_t> tc = data.target_classes;
    if (sc.empty())
      for (std::size_t c = 1; c <= data.classes; ++c) sc.push_back(c);
    if (tc.empty())
      for (std::size_t c = 1; c <= data.classes; ++c) tc.push_back(c);
    otda::Matrix means =
        parse_means(data.means_spec, data.classes, data.radius);
    td.source = draw_domain(data, means, sc, data.source_props,
                            data.seed + 2 * trial, &td.warnings);
    td.target = draw_domain(data, means, tc, data.target_props,
                            data.seed + 2 * trial + 1, &td.warnings);
  } else {
    if (data.source_path.empty() || data.target_path.empty())
      throw otda::error(otda::errc::invalid_parameter,
                        "provide --source and --target, or --synthetic");
    if (data.trials != 1)
      throw otda::error(otda::errc::invalid_parameter,
                        "--trials above 1 requires --synthetic");
    td.source = otda::read_dataset(data.source_path);
    td.target = otda::read_dataset(data.target_path);
  }
  return td;
}

std::set<int> label_set(const otda::Dataset& ds) {
  return std::set<int>(ds.labels.begin(), ds.labels.end());
}

std::vector<std::uint8_t> truth_rejected_mask(const otda::Dataset& source,
                                              const otda::Dataset& target) {
  std::set<int> known = label_set(source);
  std::vector<std::uint8_t> mask(target.size(), 0);
  for (std::size_t j = 0; j < target.size(); ++j)
    mask[j] = known.count(target.labels[j]) ? 0 : 1;
  return mask;
}

ordered_json summarize(const std::vector<std::map<std::string, double>>& rows) {
  ordered_json summary = ordered_json::object();
  if (rows.empty()) return summary;
  for (const auto& [key, first_value] : rows.front()) {
    (void)first_value;
    double mean = 0.0;
    for (const auto& row : rows) mean += row.at(key);
    mean /= static_cast<double>(rows.size());
    double var = 0.0;
    if (rows.size() > 1) {
      for (const auto& row : rows) {
        double d = row.at(key) - mean;
        var += d * d;
      }
      var /= static_cast<double>(rows.size() - 1);
    }
    summary[key] = {{"mean", mean}, {"std", std::sqrt(var)}};
  }
  return summary;
}

ordered_json kkt_json(const otda::KktReport& report) {
  return {{"g_max", report.g_max},
          {"f_residual", report.f_residual},
          {"lemma2_residual", report.lemma2_residual},
          {"pass", report.pass()}};
}

ordered_json config_json(const SolverFlags& solver, const DataFlags& data,
                         bool with_alpha) {
  ordered_json cfg;
  cfg["eta"] = solver.eta;
  if (with_alpha) cfg["alpha"] = solver.alpha;
  cfg["tol"] = solver.tol;
  cfg["max_iter"] = solver.max_iter;
  cfg["metric"] = solver.metric;
  cfg["normalize_cost"] = solver.normalize_cost;
  cfg["backend"] = otda::kern::backend_name(otda::kern::active_backend());
  cfg["trials"] = data.trials;
  cfg["seed"] = data.seed;
  if (data.synthetic) {
    ordered_json syn;
    syn["classes"] = data.classes;
    syn["n_per_class"] = data.n_per_class;
    syn["noise"] = data.noise;
    syn["radius"] = data.radius;
    syn["source_classes"] = data.source_classes;
    syn["target_classes"] = data.target_classes;
    syn["source_props"] = data.source_props;
    syn["target_props"] = data.target_props;
    cfg["synthetic"] = syn;
  } else {
    cfg["source"] = data.source_path;
    cfg["target"] = data.target_path;
  }
  return cfg;
}

void emit_report(const ordered_json& report, const std::string& path) {
  if (path.empty())
    std::cout << report.dump(2) << '\n';
  else
    otda::write_report(report, path);
}

int run_reject(const SolverFlags& solver, const DataFlags& data,
               const OutputFlags& out) {
  apply_backend(solver);
  ordered_json report;
  report["mode"] = "reject";
  report["config"] = config_json(solver, data, true);
  ordered_json trials = ordered_json::array();
  std::vector<std::map<std::string, double>> metric_rows;
  for (std::size_t t = 0; t < data.trials; ++t) {
    TrialData td = load_trial(data, t);
    otda::RejectionConfig rc{solver.eta, solver.alpha, solver.tol,
                             solver.max_iter, solver.literal_clamp};
    otda::RejectionResult res =
        otda::reject(td.source, td.target, rc, cost_options(solver));
    ordered_json trial;
    trial["trial"] = t;
    trial["n_source"] = td.source.size();
    trial["n_target"] = td.target.size();
    trial["threshold"] = res.threshold;
    trial["iterations"] = res.plan.iterations;
    trial["converged"] = res.plan.converged;
    trial["marginal_error"] = res.plan.marginal_error;
    trial["rejected_count"] = td.target.size() - res.kept_indices.size();
    trial["kkt"] = kkt_json(otda::kkt_report(res));
    if (!td.warnings.empty()) trial["warnings"] = td.warnings;
    if (td.source.has_labels() && td.target.has_labels()) {
      std::vector<std::uint8_t> truth = truth_rejected_mask(td.source, td.target);
      std::map<std::string, double> metrics;
      metrics["f1_macro_rejection"] =
          otda::rejection_macro_f1(res.rejected, truth);
      metrics["f1_common"] =
          otda::f1_binary(res.rejected, truth, otda::PositiveClass::common);
      metrics["f1_rejected"] =
          otda::f1_binary(res.rejected, truth, otda::PositiveClass::rejected);
      trial["metrics"] = metrics;
      metric_rows.push_back(metrics);
    }
    trials.push_back(trial);
    if (t + 1 == data.trials) {
      if (!out.plan_path.empty()) otda::write_plan(res.plan.coupling, out.plan_path);
      if (!out.plot_path.empty()) {
        std::vector<int> predicted(td.target.size(), otda::kUnassignedLabel);
        for (std::size_t j = 0; j < td.target.size(); ++j)
          if (res.rejected[j]) predicted[j] = otda::kRejectLabel;
        otda::write_plot_data(td.target, predicted, res.mu_t_star, res.rejected,
                              out.plot_path);
      }
    }
  }
  report["trials"] = trials;
  report["summary"] = summarize(metric_rows);
  report["timestamp"] = iso_timestamp();
  emit_report(report, out.report_path);
  return 0;
}

int run_labelshift(const SolverFlags& solver, const DataFlags& data,
                   const OutputFlags& out) {
  apply_backend(solver);
  ordered_json report;
  report["mode"] = "labelshift";
  report["config"] = config_json(solver, data, false);
  ordered_json trials = ordered_json::array();
  std::vector<std::map<std::string, double>> metric_rows;
  for (std::size_t t = 0; t < data.trials; ++t) {
    TrialData td = load_trial(data, t);
    otda::LabelShiftConfig lc{solver.eta, solver.tol, solver.max_iter,
                              solver.strict_literal};
    otda::LabelShiftResult res =
        otda::fit(td.source, td.target, otda::uniform_distribution(td.target.size()),
                  lc, cost_options(solver));
    ordered_json trial;
    trial["trial"] = t;
    trial["iterations"] = res.plan.iterations;
    trial["converged"] = res.plan.converged;
    trial["marginal_error"] = res.plan.marginal_error;
    trial["classes"] = res.classes;
    trial["nu"] = res.nu;
    if (!td.warnings.empty()) trial["warnings"] = td.warnings;
    if (td.target.has_labels()) {
      std::vector<int> universe = res.classes;
      for (int label : res.predicted_labels)
        if (std::find(universe.begin(), universe.end(), label) == universe.end())
          universe.push_back(label);
      for (int label : td.target.labels)
        if (std::find(universe.begin(), universe.end(), label) == universe.end())
          universe.push_back(label);
      std::map<std::string, double> metrics;
      metrics["accuracy"] = otda::accuracy(res.predicted_labels, td.target.labels);
      metrics["f1_macro"] =
          otda::f1_macro(res.predicted_labels, td.target.labels, universe);
      trial["metrics"] = metrics;
      metric_rows.push_back(metrics);
    }
    trials.push_back(trial);
    if (t + 1 == data.trials) {
      if (!out.plan_path.empty()) otda::write_plan(res.plan.coupling, out.plan_path);
      if (!out.plot_path.empty()) {
        std::vector<double> mu_t(td.target.size(),
                                 1.0 / static_cast<double>(td.target.size()));
        std::vector<std::uint8_t> rejected(td.target.size(), 0);
        otda::write_plot_data(td.target, res.predicted_labels, mu_t, rejected,
                              out.plot_path);
      }
    }
  }
  report["trials"] = trials;
  report["summary"] = summarize(metric_rows);
  report["timestamp"] = iso_timestamp();
  emit_report(report, out.report_path);
  return 0;
}

int run_pipeline(const SolverFlags& solver, const DataFlags& data,
                 const OutputFlags& out, const std::string& marginal_mode) {
  apply_backend(solver);
  ordered_json report;
  report["mode"] = "pipeline";
  report["config"] = config_json(solver, data, true);
  report["config"]["marginal_mode"] = marginal_mode;
  ordered_json trials = ordered_json::array();
  std::vector<std::map<std::string, double>> metric_rows;
  for (std::size_t t = 0; t < data.trials; ++t) {
    TrialData td = load_trial(data, t);
    otda::PipelineConfig pc;
    pc.eta = solver.eta;
    pc.alpha = solver.alpha;
    pc.tol = solver.tol;
    pc.max_iter = solver.max_iter;
    pc.marginal_mode = marginal_mode == "uniform" ? otda::MarginalMode::uniform
                                                  : otda::MarginalMode::learned;
    pc.literal_clamp = solver.literal_clamp;
    pc.strict_literal = solver.strict_literal;
    pc.cost = cost_options(solver);
    otda::PipelineResult res = otda::open_set_adapt(td.source, td.target, pc);
    ordered_json trial;
    trial["trial"] = t;
    trial["threshold"] = res.rejection.threshold;
    trial["rejected_count"] =
        td.target.size() - res.rejection.kept_indices.size();
    trial["rejection"] = {{"iterations", res.rejection.plan.iterations},
                          {"converged", res.rejection.plan.converged},
                          {"marginal_error", res.rejection.plan.marginal_error},
                          {"kkt", kkt_json(otda::kkt_report(res.rejection))}};
    trial["labelshift"] = {{"iterations", res.labelshift.plan.iterations},
                           {"converged", res.labelshift.plan.converged},
                           {"marginal_error", res.labelshift.plan.marginal_error}};
    trial["classes"] = res.labelshift.classes;
    trial["nu"] = res.nu;
    if (!td.warnings.empty()) trial["warnings"] = td.warnings;
    if (td.source.has_labels() && td.target.has_labels()) {
      std::set<int> known = label_set(td.source);
      std::vector<int> truth(td.target.size());
      for (std::size_t j = 0; j < td.target.size(); ++j)
        truth[j] = known.count(td.target.labels[j]) ? td.target.labels[j]
                                                    : otda::kRejectLabel;
      std::vector<int> universe{otda::kRejectLabel};
      for (int label : known) universe.push_back(label);
      for (int label : res.final_labels)
        if (std::find(universe.begin(), universe.end(), label) == universe.end())
          universe.push_back(label);
      std::vector<std::uint8_t> truth_mask(td.target.size());
      for (std::size_t j = 0; j < td.target.size(); ++j)
        truth_mask[j] = truth[j] == otda::kRejectLabel ? 1 : 0;
      std::map<std::string, double> metrics;
      metrics["f1_macro_overall"] =
          otda::f1_macro(res.final_labels, truth, universe);
      metrics["f1_macro_rejection"] =
          otda::rejection_macro_f1(res.rejection.rejected, truth_mask);
      metrics["accuracy"] = otda::accuracy(res.final_labels, truth);
      trial["metrics"] = metrics;
      metric_rows.push_back(metrics);
    }
    trials.push_back(trial);
    if (t + 1 == data.trials) {
      if (!out.plan_path.empty())
        otda::write_plan(res.labelshift.plan.coupling, out.plan_path);
      if (!out.plot_path.empty())
        otda::write_plot_data(td.target, res.final_labels,
                              res.rejection.mu_t_star,
                              res.rejection.rejected, out.plot_path);
    }
  }
  report["trials"] = trials;
  report["summary"] = summarize(metric_rows);
  report["timestamp"] = iso_timestamp();
  emit_report(report, out.report_path);
  return 0;
}

int run_reverse_validate(const SolverFlags& solver, const DataFlags& data,
                         const OutputFlags& out,
                         const std::vector<double>& grid_eta,
                         const std::vector<double>& grid_alpha, bool invert) {
  apply_backend(solver);
  TrialData td = load_trial(data, 0);
  otda::Grid grid = otda::default_grid();
  if (!grid_eta.empty()) grid.etas = grid_eta;
  if (!grid_alpha.empty()) grid.alphas = grid_alpha;
  otda::ReverseValidationConfig rv;
  rv.tol = solver.tol;
  rv.max_iter = solver.max_iter;
  rv.invert = invert;
  rv.literal_clamp = solver.literal_clamp;
  rv.cost = cost_options(solver);
  otda::SelectionReport sel = otda::reverse_validate(td.source, td.target, grid, rv);
  ordered_json report;
  report["mode"] = "reverse-validate";
  report["config"] = config_json(solver, data, false);
  report["config"]["grid_eta"] = grid.etas;
  report["config"]["grid_alpha"] = grid.alphas;
  report["config"]["invert"] = invert;
  ordered_json rows = ordered_json::array();
  for (const otda::ConfigScore& row : sel.scores) {
    rows.push_back({{"eta", row.eta},
                    {"alpha", row.alpha},
                    {"lambda", row.lambda},
                    {"score", row.score},
                    {"forward_rejected", row.forward_rejected},
                    {"backward_low", row.backward_low},
                    {"degenerate", row.degenerate}});
  }
  report["scores"] = rows;
  report["chosen"] = {{"eta", sel.chosen_eta}, {"alpha", sel.chosen_alpha}};
  report["timestamp"] = iso_timestamp();
  emit_report(report, out.report_path);
  return 0;
}

int run_generate(const DataFlags& data, const std::string& out_path,
                 const std::string& props, std::size_t total_n,
                 const std::string& report_path) {
  otda::MixtureSpec spec;
  spec.means = parse_means(data.means_spec, data.classes, data.radius);
  spec.noise = data.noise;
  spec.proportions = parse_props(props, data.classes);
  spec.n = total_n != 0 ? total_n : data.n_per_class * data.classes;
  spec.seed = data.seed;
  std::vector<std::string> warnings;
  otda::Dataset ds = otda::sample_mixture(spec, &warnings);
  otda::write_dataset(ds, out_path);
  ordered_json report;
  report["mode"] = "generate";
  report["out"] = out_path;
  report["n"] = ds.size();
  report["classes"] = data.classes;
  report["noise"] = spec.noise;
  report["seed"] = data.seed;
  std::vector<std::size_t> counts = otda::class_counts(spec.n, spec.proportions);
  report["counts"] = counts;
  if (!warnings.empty()) report["warnings"] = warnings;
  report["timestamp"] = iso_timestamp();
  emit_report(report, report_path);
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& report_path) {
  otda::Dataset pred = otda::read_dataset(pred_path);
  otda::Dataset truth = otda::read_dataset(truth_path);
  if (!pred.has_labels() || !truth.has_labels())
    throw otda::error(otda::errc::invalid_input,
                      "eval requires labeled prediction and truth datasets");
  if (pred.size() != truth.size())
    throw otda::error(otda::errc::invalid_input,
                      "prediction and truth row counts differ (" +
                          std::to_string(pred.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  std::set<int> labels(pred.labels.begin(), pred.labels.end());
  labels.insert(truth.labels.begin(), truth.labels.end());
  std::vector<int> universe(labels.begin(), labels.end());
  otda::ConfusionTable table = otda::confusion(pred.labels, truth.labels, universe);
  ordered_json report;
  report["mode"] = "eval";
  report["n"] = pred.size();
  report["universe"] = universe;
  ordered_json per_class = ordered_json::array();
  for (std::size_t c = 0; c < universe.size(); ++c) {
    double denom = static_cast<double>(2 * table.tp[c] + table.fp[c] + table.fn[c]);
    double f1 = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(table.tp[c]) / denom;
    per_class.push_back({{"label", universe[c]},
                         {"tp", table.tp[c]},
                         {"fp", table.fp[c]},
                         {"fn", table.fn[c]},
                         {"f1", f1}});
  }
  report["per_class"] = per_class;
  report["f1_macro"] = otda::f1_macro(pred.labels, truth.labels, universe);
  report["accuracy"] = otda::accuracy(pred.labels, truth.labels);
  report["timestamp"] = iso_timestamp();
  emit_report(report, report_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-transport open-set domain adaptation"};
  app.require_subcommand(1);

  SolverFlags solver;
  DataFlags data;
  OutputFlags output;
  std::string marginal_mode = "learned";
  std::vector<double> grid_eta, grid_alpha;
  bool invert = false;
  std::string gen_out, gen_props = "uniform";
  std::size_t gen_n = 0;
  std::string eval_pred, eval_truth;

  CLI::App* reject = app.add_subcommand("reject", "unknown-class rejection");
  add_solver_flags(reject, solver, true);
  reject->add_flag("--literal-clamp", solver.literal_clamp,
                   "use the pseudocode clamp bound");
  add_data_flags(reject, data);
  add_output_flags(reject, output);

  CLI::App* labelshift =
      app.add_subcommand("labelshift", "class-proportion estimation");
  add_solver_flags(labelshift, solver, false);
  labelshift->add_flag("--strict-literal", solver.strict_literal,
                       "skip the simplex renormalization of nu");
  add_data_flags(labelshift, data);
  add_output_flags(labelshift, output);

  CLI::App* pipeline = app.add_subcommand("pipeline", "rejection then label shift");
  add_solver_flags(pipeline, solver, true);
  pipeline->add_flag("--literal-clamp", solver.literal_clamp,
                     "use the pseudocode clamp bound in rejection");
  pipeline->add_flag("--strict-literal", solver.strict_literal,
                     "skip the simplex renormalization of nu");
  pipeline->add_option("--marginal-mode", marginal_mode, "uniform or learned")
      ->check(CLI::IsMember({"uniform", "learned"}));
  add_data_flags(pipeline, data);
  add_output_flags(pipeline, output);

  CLI::App* rv = app.add_subcommand("reverse-validate",
                                    "grid search over (eta, alpha)");
  add_solver_flags(rv, solver, false);
  rv->add_option("--grid-eta", grid_eta, "eta grid")->delimiter(',');
  rv->add_option("--grid-alpha", grid_alpha, "alpha grid")->delimiter(',');
  rv->add_flag("--invert", invert, "select the minimal score");
  add_data_flags(rv, data);
  add_output_flags(rv, output);

  CLI::App* generate = app.add_subcommand("generate", "draw a Gaussian mixture");
  generate->add_option("--out", gen_out, "output CSV")->required();
  generate->add_option("--n", gen_n, "total samples (default n-per-class * classes)");
  generate->add_option("--proportions", gen_props,
                       "uniform|forward|reverse or comma list");
  generate->add_option("--classes", data.classes, "number of classes");
  generate->add_option("--n-per-class", data.n_per_class, "samples per class");
  generate->add_option("--noise", data.noise, "standard deviation");
  generate->add_option("--radius", data.radius, "circle radius");
  generate->add_option("--means", data.means_spec, "explicit means 'x:y;x:y'");
  generate->add_option("--seed", data.seed, "RNG seed");
  generate->add_option("--report", output.report_path, "JSON report path");

  CLI::App* eval = app.add_subcommand("eval", "score predictions against truth");
  eval->add_option("--pred", eval_pred, "predicted labels CSV")->required();
  eval->add_option("--truth", eval_truth, "ground truth CSV")->required();
  eval->add_option("--report", output.report_path, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  // Label-shift estimation wants a much smaller default eta than rejection.
  if ((labelshift->parsed() && labelshift->count("--eta") == 0) ||
      (pipeline->parsed() && pipeline->count("--eta") == 0))
    solver.eta = 0.001;

  try {
    if (reject->parsed()) return run_reject(solver, data, output);
    if (labelshift->parsed()) return run_labelshift(solver, data, output);
    if (pipeline->parsed())
      return run_pipeline(solver, data, output, marginal_mode);
    if (rv->parsed())
      return run_reverse_validate(solver, data, output, grid_eta, grid_alpha,
                                  invert);
    if (generate->parsed())
      return run_generate(data, gen_out, gen_props, gen_n, output.report_path);
    if (eval->parsed()) return run_eval(eval_pred, eval_truth, output.report_path);
  } catch (const otda::error& e) {
    std::cerr << "otda: error [" << e.category() << "]: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "otda: error [internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
