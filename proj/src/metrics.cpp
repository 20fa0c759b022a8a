#include "otda/metrics.hpp"

#include <algorithm>
#include <string>

namespace otda {

namespace {

double f1_from_counts(long long tp, long long fp, long long fn) {
  long long denom = 2 * tp + fp + fn;
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

ConfusionTable confusion(const std::vector<int>& predicted,
                         const std::vector<int>& truth,
                         const std::vector<int>& universe) {
  if (predicted.size() != truth.size())
    throw error(errc::invalid_input,
                "prediction and truth lengths differ (" +
                    std::to_string(predicted.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  if (universe.empty())
    throw error(errc::invalid_input, "label universe is empty");
  ConfusionTable table;
  table.labels = universe;
  table.tp.assign(universe.size(), 0);
  table.fp.assign(universe.size(), 0);
  table.fn.assign(universe.size(), 0);
  auto index_of = [&](int label) {
    auto it = std::find(universe.begin(), universe.end(), label);
    if (it == universe.end())
      throw error(errc::invalid_input,
                  "label " + std::to_string(label) + " outside the universe");
    return static_cast<std::size_t>(it - universe.begin());
  };
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    std::size_t p = index_of(predicted[i]);
    std::size_t t = index_of(truth[i]);
    if (p == t) {
      ++table.tp[p];
    } else {
      ++table.fp[p];
      ++table.fn[t];
    }
  }
  return table;
}

double f1_binary(const std::vector<std::uint8_t>& predicted_rejected,
                 const std::vector<std::uint8_t>& true_rejected,
                 PositiveClass positive) {
  if (predicted_rejected.size() != true_rejected.size())
    throw error(errc::invalid_input,
                "mask lengths differ (" +
                    std::to_string(predicted_rejected.size()) + " vs " +
                    std::to_string(true_rejected.size()) + ")");
  bool pos = positive == PositiveClass::rejected;
  long long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted_rejected.size(); ++i) {
    bool p = (predicted_rejected[i] != 0) == pos;
    bool t = (true_rejected[i] != 0) == pos;
    if (p && t) ++tp;
    else if (p && !t) ++fp;
    else if (!p && t) ++fn;
  }
  return f1_from_counts(tp, fp, fn);
}

double f1_macro(const std::vector<int>& predicted,
                const std::vector<int>& truth,
                const std::vector<int>& universe) {
  ConfusionTable table = confusion(predicted, truth, universe);
  double sum = 0.0;
  for (std::size_t c = 0; c < universe.size(); ++c)
    sum += f1_from_counts(table.tp[c], table.fp[c], table.fn[c]);
  return sum / static_cast<double>(universe.size());
}

double rejection_macro_f1(const std::vector<std::uint8_t>& predicted_rejected,
                          const std::vector<std::uint8_t>& true_rejected) {
  return 0.5 * (f1_binary(predicted_rejected, true_rejected,
                          PositiveClass::common) +
                f1_binary(predicted_rejected, true_rejected,
                          PositiveClass::rejected));
}

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw error(errc::invalid_input,
                "prediction and truth lengths differ (" +
                    std::to_string(predicted.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  if (predicted.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace otda
