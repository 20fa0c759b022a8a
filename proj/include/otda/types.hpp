#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace otda {

enum class errc {
  invalid_input = 2,
  invalid_parameter = 3,
  numerical_failure = 4,
  parse_error = 5,
  io_error = 6,
  empty_survivor_set = 7,
};

const char* errc_name(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  errc code() const noexcept { return code_; }
  const char* category() const noexcept { return errc_name(code_); }

 private:
  errc code_;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const noexcept {
    return data_.data() + i * cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Feature vectors (n x d), optionally with integer class labels in {1..C}.
struct Dataset {
  Matrix points;
  std::vector<int> labels;  // empty, or one label per row

  std::size_t size() const noexcept { return points.rows(); }
  std::size_t dim() const noexcept { return points.cols(); }
  bool has_labels() const noexcept { return !labels.empty(); }
};

// Throws error(invalid_input) if the dataset is empty, zero-dimensional,
// carries non-finite features, or has a label count mismatching its rows.
// `name` identifies the dataset in error messages.
void validate_dataset(const Dataset& ds, const std::string& name);

// Probability mass vector over n support points.
struct DiscreteDistribution {
  std::vector<double> mass;

  std::size_t size() const noexcept { return mass.size(); }
};

DiscreteDistribution uniform_distribution(std::size_t n);

// Throws error(invalid_input) unless the mass is nonnegative and sums to 1
// within 1e-9.
void validate_distribution(const DiscreteDistribution& mu,
                           const std::string& name);

}  // namespace otda
