#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "otda/types.hpp"

namespace otda {

// CSV with header f0..f{d-1} plus an optional final integer column "label"
// (values >= 1). Parse failures name the offending line.
Dataset read_dataset(const std::string& path);

// Same schema; feature values are written with 17 significant digits so the
// round trip is exact.
void write_dataset(const Dataset& ds, const std::string& path);

// JSON report with stable key order.
void write_report(const nlohmann::ordered_json& report,
                  const std::string& path);

// Sparse triplets "i,j,mass" for coupling entries strictly above the
// threshold.
void write_plan(const Matrix& coupling, const std::string& path,
                double dump_threshold = 1e-12);

// Point-level dump for external plotting: x, y, true_label, predicted_label,
// mu_t, rejected. true_labels may be empty (written as 0).
void write_plot_data(const Dataset& target,
                     const std::vector<int>& predicted_labels,
                     const std::vector<double>& mu_t,
                     const std::vector<std::uint8_t>& rejected,
                     const std::string& path);

// "%.17g", with a trailing ".0" appended to bare integers so every cell reads
// back as a real.
std::string format_double(double value);

}  // namespace otda
