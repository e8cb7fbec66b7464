#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "doa/fracops.hpp"

using namespace doa;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) {
    v = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  return out;
}

}  // namespace

TEST_CASE("gl coefficient recurrences") {
  SUBCASE("order 1 is the first difference") {
    const auto w = gl_coefficients(1.0, 4);
    CHECK(w == std::vector<double>{1.0, -1.0, 0.0, 0.0});
  }
  SUBCASE("order 0 is the identity") {
    const auto w = gl_coefficients(0.0, 4);
    CHECK(w == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  }
  SUBCASE("order 0.5 hand-unrolled") {
    const auto w = gl_coefficients(0.5, 4);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == -0.5);
    CHECK(w[2] == -0.125);
    CHECK(w[3] == -0.0625);
  }
  SUBCASE("integral weights (order -0.5) are non-negative") {
    const auto w = gl_coefficients(-0.5, 64);
    for (double v : w) CHECK(v >= 0.0);
  }
}

TEST_CASE("unit-order derivative of a ramp converges to 1") {
  const double dt = 0.1;
  FracOperator d(FracKind::derivative, 1.0, dt);
  double out = 0;
  for (int i = 0; i < 50; ++i) out = d.apply(i * dt);
  CHECK(out == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unit-order integral of a constant is a running sum") {
  const double dt = 0.1;
  FracOperator in(FracKind::integral, 1.0, dt);
  double out = 0;
  for (int i = 0; i < 100; ++i) out = in.apply(1.0);
  CHECK(out == doctest::Approx(10.0).epsilon(0.02));
}

TEST_CASE("half-order integral of a constant tracks t^0.5/gamma(1.5)") {
  const double dt = 0.01;
  FracOperator in(FracKind::integral, 0.5, dt);
  double out = 0;
  const int n = 500;  // t = 5 min
  for (int i = 1; i <= n; ++i) out = in.apply(1.0);
  const double t = n * dt;
  const double closed_form = std::sqrt(t) / std::tgamma(1.5);
  CHECK(std::abs(out - closed_form) / closed_form < 0.05);
}

TEST_CASE("reset") {
  FracOperator op(FracKind::integral, 0.7, 0.05);
  for (int i = 0; i < 20; ++i) op.apply(std::sin(0.3 * i));

  SUBCASE("reset then apply(0) gives 0") {
    op.reset();
    CHECK(op.apply(0.0) == 0.0);
  }
  SUBCASE("reset is idempotent") {
    op.reset();
    FracOperator twice = op;
    twice.reset();
    const auto sig = random_signal(64, 11, -1, 1);
    for (double v : sig) CHECK(op.apply(v) == twice.apply(v));
  }
  SUBCASE("reset equals a fresh operator on random sequences") {
    op.reset();
    FracOperator fresh(FracKind::integral, 0.7, 0.05);
    const auto sig = random_signal(256, 12, -2, 2);
    for (double v : sig) CHECK(op.apply(v) == fresh.apply(v));
  }
}

TEST_CASE("order 1 degenerates to integer-order operators") {
  const double dt = 0.02;
  const auto sig = random_signal(1000, 21, -3, 3);

  FracOperator der(FracKind::derivative, 1.0, dt);
  FracOperator in(FracKind::integral, 1.0, dt);
  double prev = 0.0, acc = 0.0;
  for (double v : sig) {
    const double d_frac = der.apply(v);
    const double d_plain = (v - prev) / dt;
    prev = v;
    CHECK(std::abs(d_frac - d_plain) < 1e-9);

    const double i_frac = in.apply(v);
    acc += v * dt;
    CHECK(std::abs(i_frac - acc) < 1e-9);
  }
}

TEST_CASE("linearity") {
  const double dt = 0.01;
  const auto x = random_signal(1000, 31, -1, 1);
  const auto y = random_signal(1000, 32, -1, 1);
  const double a = 1.7, b = -0.4;
  for (FracKind kind : {FracKind::integral, FracKind::derivative}) {
    FracOperator ox(kind, 0.8, dt), oy(kind, 0.8, dt), oz(kind, 0.8, dt);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double fx = ox.apply(x[i]);
      const double fy = oy.apply(y[i]);
      const double fz = oz.apply(a * x[i] + b * y[i]);
      CHECK(std::abs(fz - (a * fx + b * fy)) < 1e-9);
    }
  }
}

TEST_CASE("default memory covers the design horizon exactly") {
  // 3000 samples (30 min at dt = 0.01) fit inside the 4096-sample window,
  // so doubling the window cannot change anything.
  const auto sig = random_signal(3000, 41, 0.5, 1.5);
  for (FracKind kind : {FracKind::integral, FracKind::derivative}) {
    FracOperator small(kind, 0.5, 0.01, 4096);
    FracOperator big(kind, 0.5, 0.01, 8192);
    double out_s = 0, out_b = 0;
    for (double v : sig) {
      out_s = small.apply(v);
      out_b = big.apply(v);
    }
    CHECK(out_s == out_b);
  }
}

TEST_CASE("derivative truncation error is small past the window") {
  // Derivative weights decay ~ j^-(1+beta); doubling the default window on
  // a signal that overruns it moves the output by well under 1%.
  const auto sig = random_signal(6000, 42, 0.5, 1.5);
  FracOperator small(FracKind::derivative, 0.5, 0.01, 4096);
  FracOperator big(FracKind::derivative, 0.5, 0.01, 8192);
  double out_s = 0, out_b = 0;
  for (double v : sig) {
    out_s = small.apply(v);
    out_b = big.apply(v);
  }
  CHECK(std::abs(out_s - out_b) / std::abs(out_b) < 0.01);
}

TEST_CASE("preview does not mutate") {
  FracOperator op(FracKind::integral, 0.6, 0.01);
  op.apply(1.0);
  op.apply(2.0);
  const double before = op.held();
  const double p1 = op.preview(3.0);
  const double p2 = op.preview(3.0);
  CHECK(p1 == p2);
  CHECK(op.held() == before);
  CHECK(op.apply(3.0) == p1);
}
