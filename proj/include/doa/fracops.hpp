#pragma once

// Discrete-time fractional integral and derivative operators based on the
// Grunwald-Letnikov binomial expansion with short-memory truncation. A
// derivative of order b computes dt^-b * sum_j w_j(b) x(t - j dt); an
// integral of order a uses the weights of order -a (all non-negative) and
// scales by dt^a. Order 1 degenerates to the plain backward difference and
// the rectangular running sum.

#include <cstddef>
#include <vector>

namespace doa {

enum class FracKind { integral, derivative };

// GL binomial weights: w0 = 1, wj = w_{j-1} * (1 - (order + 1) / j).
std::vector<double> gl_coefficients(double order, std::size_t n);

class FracOperator {
 public:
  static constexpr std::size_t kDefaultMemory = 4096;

  FracOperator() = default;
  FracOperator(FracKind kind, double order, double dt,
               std::size_t memory_len = kDefaultMemory);

  // Output as if `sample` were pushed, without mutating state.
  double preview(double sample) const;

  // Push a sample whose output was already computed via preview().
  void push(double sample, double out);

  // preview + push.
  double apply(double sample);

  // Output of the current history, i.e. the value of the last apply().
  // Used by conditional anti-windup to freeze the integral term.
  double held() const { return last_; }

  // Clears history; coefficients are retained.
  void reset();

  FracKind kind() const { return kind_; }
  double order() const { return order_; }
  double dt() const { return dt_; }
  std::size_t memory_len() const { return weights_.size(); }

 private:
  FracKind kind_ = FracKind::integral;
  double order_ = 1.0;
  double dt_ = 0.01;
  double scale_ = 0.01;            // dt^order (integral) or dt^-order (derivative)
  std::vector<double> weights_;    // GL weights, lag 0 first
  std::vector<double> hist_;       // ring buffer, hist_[head_] = newest
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  double last_ = 0.0;
};

}  // namespace doa
