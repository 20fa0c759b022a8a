#include "otda/datagen.hpp"

#include <cmath>
#include <random>

namespace otda {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// One centered unit-normal pair per call.
void box_muller(std::mt19937_64& eng, double& z0, double& z1) {
  double u1 = 1.0 - uniform01(eng);  // (0, 1]
  double u2 = uniform01(eng);
  double r = std::sqrt(-2.0 * std::log(u1));
  z0 = r * std::cos(2.0 * kPi * u2);
  z1 = r * std::sin(2.0 * kPi * u2);
}

}  // namespace

Matrix circle_means(std::size_t num_classes, double radius) {
  if (num_classes == 0)
    throw error(errc::invalid_parameter, "class count must be at least 1");
  Matrix means(num_classes, 2);
  for (std::size_t c = 0; c < num_classes; ++c) {
    double theta = (90.0 + 360.0 * static_cast<double>(c) /
                               static_cast<double>(num_classes)) *
                   kPi / 180.0;
    means(c, 0) = radius * std::cos(theta);
    means(c, 1) = radius * std::sin(theta);
  }
  return means;
}

std::vector<std::size_t> class_counts(std::size_t n,
                                      const std::vector<double>& proportions) {
  std::size_t num_classes = proportions.size();
  std::vector<double> raw(num_classes);
  std::vector<long long> counts(num_classes);
  long long total = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    raw[c] = static_cast<double>(n) * proportions[c];
    counts[c] = std::llround(raw[c]);
    total += counts[c];
  }
  while (total != static_cast<long long>(n)) {
    if (total < static_cast<long long>(n)) {
      std::size_t pick = 0;
      double best = -1e300;
      for (std::size_t c = 0; c < num_classes; ++c) {
        double deficit = raw[c] - static_cast<double>(counts[c]);
        if (deficit > best) {
          best = deficit;
          pick = c;
        }
      }
      ++counts[pick];
      ++total;
    } else {
      std::size_t pick = 0;
      double best = 1e300;
      for (std::size_t c = 0; c < num_classes; ++c) {
        if (counts[c] == 0) continue;
        double deficit = raw[c] - static_cast<double>(counts[c]);
        if (deficit < best) {
          best = deficit;
          pick = c;
        }
      }
      --counts[pick];
      --total;
    }
  }
  return std::vector<std::size_t>(counts.begin(), counts.end());
}

Dataset sample_mixture(const MixtureSpec& spec,
                       std::vector<std::string>* warnings) {
  std::size_t num_classes = spec.means.rows();
  if (num_classes == 0 || spec.means.cols() != 2)
    throw error(errc::invalid_parameter, "means must be a C x 2 matrix");
  if (spec.proportions.size() != num_classes)
    throw error(errc::invalid_parameter,
                "proportions length does not match the number of classes");
  double sum = 0.0;
  for (double p : spec.proportions) {
    if (!(p >= 0.0))
      throw error(errc::invalid_parameter, "proportions must be nonnegative");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw error(errc::invalid_parameter, "proportions must sum to 1");
  if (!(spec.noise > 0.0))
    throw error(errc::invalid_parameter, "noise must be positive");
  if (spec.n < num_classes)
    throw error(errc::invalid_parameter,
                "n must be at least the number of classes");

  std::vector<std::size_t> counts = class_counts(spec.n, spec.proportions);
  Dataset out;
  out.points = Matrix(spec.n, 2);
  out.labels.resize(spec.n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      if (spec.proportions[c] > 0.0 && warnings)
        warnings->push_back("class " + std::to_string(c + 1) +
                            " count rounded to zero");
      continue;
    }
    std::mt19937_64 eng(splitmix64(spec.seed + 0x9E3779B97F4A7C15ULL *
                                                   static_cast<std::uint64_t>(c + 1)));
    for (std::size_t p = 0; p < counts[c]; ++p, ++row) {
      double z0, z1;
      box_muller(eng, z0, z1);
      out.points(row, 0) = spec.means(c, 0) + spec.noise * z0;
      out.points(row, 1) = spec.means(c, 1) + spec.noise * z1;
      out.labels[row] = static_cast<int>(c) + 1;
    }
  }
  return out;
}

std::vector<double> unbalanced_schedule(std::size_t num_classes,
                                        ScheduleKind kind) {
  if (num_classes < 2)
    throw error(errc::invalid_parameter,
                "unbalanced schedule requires at least 2 classes");
  double total = static_cast<double>(num_classes * (num_classes + 1)) / 2.0;
  std::vector<double> p(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c)
    p[c] = static_cast<double>(c + 1) / total;
  if (kind == ScheduleKind::reverse)
    for (std::size_t c = 0; c < num_classes / 2; ++c)
      std::swap(p[c], p[num_classes - 1 - c]);
  return p;
}

}  // namespace otda
