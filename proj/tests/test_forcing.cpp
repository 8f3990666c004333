#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "bounce/forcing.hpp"
#include "support/desk.hpp"

using namespace bounce;
using Catch::Approx;

namespace {

// independent term-by-term series evaluation, accumulated in long double
ForcingEval series_oracle(const std::vector<double>& a, const std::vector<double>& b, double t) {
  const long double w = 2.0L * std::numbers::pi_v<long double>;
  long double f = 0, fd = 0, fdd = 0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const long double k = i + 1;
    const long double ak = i < a.size() ? a[i] : 0.0;
    const long double bk = i < b.size() ? b[i] : 0.0;
    f += ak * std::cos(w * k * t) + bk * std::sin(w * k * t);
    fd += w * k * (-ak * std::sin(w * k * t) + bk * std::cos(w * k * t));
    fdd += -w * w * k * k * (ak * std::cos(w * k * t) + bk * std::sin(w * k * t));
  }
  return {static_cast<double>(f), static_cast<double>(fd), static_cast<double>(fdd)};
}

}  // namespace

TEST_CASE("eval_with_derivatives on the desk instance") {
  const auto spec = testsupport::desk_spec();
  const auto at0 = eval_with_derivatives(spec, 0.0);
  CHECK(at0.f == Approx(0.2).margin(1e-15));
  CHECK(at0.fdot == Approx(0.0).margin(1e-15));
  CHECK(at0.fddot == Approx(-0.8 * std::numbers::pi * std::numbers::pi).margin(1e-12));

  const auto a = eval_with_derivatives(spec, 0.37);
  const auto b = eval_with_derivatives(spec, 1.37);
  CHECK(a.f == Approx(b.f).margin(1e-12));
  CHECK(a.fdot == Approx(b.fdot).margin(1e-12));
  CHECK(a.fddot == Approx(b.fddot).margin(1e-12));

  const auto got = eval_with_derivatives(spec, 0.3);
  const auto want = series_oracle({0.2}, {}, 0.3);
  CHECK(got.f == Approx(want.f).margin(1e-13));
  CHECK(got.fdot == Approx(want.fdot).margin(1e-13));
  CHECK(got.fddot == Approx(want.fddot).margin(1e-12));
}

TEST_CASE("periodicity of all derivatives on random points") {
  const ForcingSpec spec(1.0, {0.1, 0.0, 0.03}, {0.05, 0.02});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    const auto x = spec.eval(t);
    const auto y = spec.eval(t + 1.0);
    CHECK(std::abs(x.f - y.f) < 1e-12);
    CHECK(std::abs(x.fdot - y.fdot) < 1e-12);
    CHECK(std::abs(x.fddot - y.fddot) < 1e-12);
  }
}

TEST_CASE("divided_difference basics") {
  const ForcingSpec constant(1.0, {}, {});  // f == 0
  CHECK(divided_difference(constant, 0.3, 5.1) == 0.0);

  const auto spec = testsupport::desk_spec();
  CHECK(divided_difference(spec, 0.2, 1.2) == Approx(0.0).margin(1e-14));
  CHECK(divided_difference(spec, 0.0, 0.5) == Approx(-0.8).margin(1e-14));

  // removable singularity falls back to the midpoint derivative
  CHECK(divided_difference(spec, 0.3, 0.3) == Approx(spec.eval(0.3).fdot).margin(1e-12));
  CHECK(divided_difference(spec, 0.3, 0.3 + 5e-9) ==
        Approx(spec.eval(0.3).fdot).margin(1e-7));
}

TEST_CASE("divided_difference symmetry and mean-value bound") {
  const ForcingSpec spec(1.0, {0.15, 0.02}, {0.07});
  const double bound = spec.max_abs_fdot();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 300; ++i) {
    const double t0 = u(rng), t1 = u(rng);
    const double d01 = divided_difference(spec, t0, t1);
    CHECK(d01 == Approx(divided_difference(spec, t1, t0)).margin(1e-12));
    CHECK(std::abs(d01) <= bound + 1e-9);
  }
}

TEST_CASE("normalize: desk instance is already normalized") {
  auto [spec, anchors] = normalize(testsupport::desk_spec());
  CHECK(spec.phase_shift() == Approx(0.0).margin(1e-12));
  CHECK(std::abs(spec.eval(0.0).fdot) < 1e-10);

  // independent re-derivation: bisection on 2 f' -+ g over one period
  const auto raw = testsupport::desk_spec();
  const double t_star =
      bisect([&](double t) { return 2.0 * raw.eval(t).fdot - 1.0; }, 0.5, 0.6, 1e-13);
  const double t_sharp =
      bisect([&](double t) { return 2.0 * raw.eval(t).fdot + 1.0; }, 0.0, 0.1, 1e-13) - 1.0;
  CHECK(anchors.t_star == Approx(t_star).margin(1e-10));
  CHECK(anchors.t_sharp == Approx(t_sharp).margin(1e-10));
  CHECK(anchors.t_star == Approx(testsupport::kDeskTStar).margin(1e-10));
  CHECK(anchors.t_sharp == Approx(testsupport::kDeskTSharp).margin(1e-10));

  CHECK(std::abs(2.0 * spec.eval(anchors.t_star).fdot - 1.0) < 1e-10);
  CHECK(std::abs(2.0 * spec.eval(anchors.t_sharp).fdot + 1.0) < 1e-10);
  CHECK(anchors.t_sharp >= -1.0);
  CHECK(anchors.t_sharp < 0.0);
  CHECK(anchors.t_star > 0.0);
  CHECK(anchors.t_star <= 1.0);
}

TEST_CASE("normalize: sine forcing shifts by a quarter period") {
  const ForcingSpec sine(1.0, {}, {0.2});
  auto [spec, anchors] = normalize(sine);
  CHECK(spec.phase_shift() == Approx(0.25).margin(1e-10));
  CHECK(std::abs(spec.eval(0.0).fdot) < 1e-10);
  // after the shift this is the cosine desk instance
  CHECK(spec.value(0.0) == Approx(0.2).margin(1e-10));
  (void)anchors;
}

TEST_CASE("normalize: amplitude too small violates the hypothesis") {
  const ForcingSpec weak(1.0, {0.01}, {});
  CHECK_THROWS_MATCHES(normalize(weak), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::HypothesisViolated;
                       }));
}

TEST_CASE("normalize is idempotent") {
  const ForcingSpec spec(1.0, {0.1, 0.02}, {0.15});
  auto [once, a1] = normalize(spec);
  auto [twice, a2] = normalize(once);
  CHECK(std::abs(twice.phase_shift() - once.phase_shift()) < 1e-10);
  CHECK(a1.t_star == Approx(a2.t_star).margin(1e-9));
  CHECK(a1.t_sharp == Approx(a2.t_sharp).margin(1e-9));
}
