#include "doa/fracops.hpp"

#include <cmath>
#include <stdexcept>

namespace doa {

std::vector<double> gl_coefficients(double order, std::size_t n) {
  if (n < 1) throw std::invalid_argument("gl_coefficients: n must be >= 1");
  std::vector<double> w(n);
  w[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    w[j] = w[j - 1] * (1.0 - (order + 1.0) / static_cast<double>(j));
  }
  return w;
}

FracOperator::FracOperator(FracKind kind, double order, double dt,
                           std::size_t memory_len)
    : kind_(kind), order_(order), dt_(dt) {
  if (!(order > 0.0 && order < 2.0)) {
    throw std::invalid_argument("FracOperator: order must be in (0, 2)");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("FracOperator: dt must be > 0");
  if (memory_len < 1) throw std::invalid_argument("FracOperator: memory_len must be >= 1");

  if (kind == FracKind::derivative) {
    weights_ = gl_coefficients(order, memory_len);
    scale_ = std::pow(dt, -order);
  } else {
    // Integral weights are the GL weights of order -a; all non-negative.
    weights_ = gl_coefficients(-order, memory_len);
    scale_ = std::pow(dt, order);
  }
  hist_.assign(memory_len, 0.0);
}

double FracOperator::preview(double sample) const {
  double acc = weights_[0] * sample;
  // hist_[head_] holds lag 1 relative to the incoming sample.
  const std::size_t cap = hist_.size();
  std::size_t idx = head_;
  const std::size_t lags = std::min(count_, cap - 1);
  for (std::size_t j = 1; j <= lags; ++j) {
    acc += weights_[j] * hist_[idx];
    idx = (idx == 0) ? cap - 1 : idx - 1;
  }
  return scale_ * acc;
}

void FracOperator::push(double sample, double out) {
  head_ = (head_ + 1 == hist_.size()) ? 0 : head_ + 1;
  hist_[head_] = sample;
  if (count_ < hist_.size()) ++count_;
  last_ = out;
}

double FracOperator::apply(double sample) {
  const double out = preview(sample);
  push(sample, out);
  return out;
}

void FracOperator::reset() {
  std::fill(hist_.begin(), hist_.end(), 0.0);
  head_ = 0;
  count_ = 0;
  last_ = 0.0;
}

}  // namespace doa
