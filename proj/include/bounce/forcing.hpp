#pragma once

// The 1-periodic racket motion f as a finite trigonometric series, together
// with the normalization that places a critical point of f at t = 0 and the
// anchor times where 2*f' crosses +-g.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "bounce/errors.hpp"
#include "bounce/rootfind.hpp"

namespace bounce {

struct ForcingEval {
  double f;
  double fdot;
  double fddot;
};

class ForcingSpec {
 public:
  ForcingSpec(double g, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
              double phase_shift = 0.0)
      : g_(g),
        cos_coeffs_(std::move(cos_coeffs)),
        sin_coeffs_(std::move(sin_coeffs)),
        phase_shift_(phase_shift) {
    if (!(g_ > 0.0))
      throw Error(ErrorKind::ConfigError, "racket", "ForcingSpec", "gravity must be positive");
  }

  double g() const { return g_; }
  const std::vector<double>& cos_coeffs() const { return cos_coeffs_; }
  const std::vector<double>& sin_coeffs() const { return sin_coeffs_; }
  double phase_shift() const { return phase_shift_; }

  // Harmonic k keeps its own angle; the argument is reduced mod 1 first so
  // that the series stays accurate for impact times of order 1e5.
  ForcingEval eval(double t) const {
    const double u = t - std::floor(t);
    const double w = 2.0 * std::numbers::pi;
    ForcingEval out{0.0, 0.0, 0.0};
    const std::size_t n = std::max(cos_coeffs_.size(), sin_coeffs_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(i + 1);
      const double c = std::cos(w * k * u);
      const double s = std::sin(w * k * u);
      const double a = i < cos_coeffs_.size() ? cos_coeffs_[i] : 0.0;
      const double b = i < sin_coeffs_.size() ? sin_coeffs_[i] : 0.0;
      out.f += a * c + b * s;
      out.fdot += w * k * (-a * s + b * c);
      out.fddot += w * w * k * k * (-a * c - b * s);
    }
    return out;
  }

  double value(double t) const { return eval(t).f; }
  double deriv(double t) const { return eval(t).fdot; }

  // Time-translated copy: f_new(t) = f(t + s), coefficients rotated exactly.
  ForcingSpec shifted(double s) const {
    const double w = 2.0 * std::numbers::pi;
    std::vector<double> ca(std::max(cos_coeffs_.size(), sin_coeffs_.size()), 0.0);
    std::vector<double> sa(ca.size(), 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      const double a = i < cos_coeffs_.size() ? cos_coeffs_[i] : 0.0;
      const double b = i < sin_coeffs_.size() ? sin_coeffs_[i] : 0.0;
      const double c = std::cos(w * k * s);
      const double sn = std::sin(w * k * s);
      ca[i] = a * c + b * sn;
      sa[i] = -a * sn + b * c;
    }
    return ForcingSpec(g_, std::move(ca), std::move(sa), phase_shift_ + s);
  }

  // Sampled sup of |f| and |f'| over one period, refined around each grid
  // maximum. Used only for bounds entering the constants.
  double max_abs_f() const { return sampled_max([this](double t) { return std::abs(eval(t).f); }); }
  double max_abs_fdot() const {
    return sampled_max([this](double t) { return std::abs(eval(t).fdot); });
  }

 private:
  template <class F>
  static double sampled_max(F fn) {
    const int n = 20000;
    double best = 0.0, arg = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      const double v = fn(t);
      if (v > best) {
        best = v;
        arg = t;
      }
    }
    // golden-section refine in the bracketing cell
    double a = arg - 1.0 / n, b = arg + 1.0 / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = fn(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = fn(x1);
      }
    }
    return std::max({best, f1, f2});
  }

  double g_;
  std::vector<double> cos_coeffs_;
  std::vector<double> sin_coeffs_;
  double phase_shift_;
};

inline ForcingEval eval_with_derivatives(const ForcingSpec& spec, double t) {
  return spec.eval(t);
}

// Averaged racket velocity over a flight, f[t1,t0]. Near-coincident arguments
// fall back to the midpoint derivative (removable singularity).
inline double divided_difference(const ForcingSpec& spec, double t0, double t1) {
  if (std::abs(t1 - t0) < 1e-8) return spec.eval(0.5 * (t0 + t1)).fdot;
  return (spec.eval(t1).f - spec.eval(t0).f) / (t1 - t0);
}

// t_bar0: critical point of f moved to 0 by normalize().
// t_star: 2 f'(t_star) = g, t_sharp: 2 f'(t_sharp) = -g, with
// -1 <= t_sharp < 0 < t_star <= 1.
struct Anchors {
  double t_bar0;
  double t_star;
  double t_sharp;
};

namespace detail {

// All sign changes of fn over [0,1), scanned on `n` cells and bisected.
template <class F>
std::vector<double> period_roots(F fn, int n = 10000) {
  std::vector<double> roots;
  double prev = fn(0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double cur = fn(t);
    if (prev == 0.0) roots.push_back(static_cast<double>(i - 1) / n);
    else if (prev * cur < 0.0)
      roots.push_back(bisect(fn, static_cast<double>(i - 1) / n, t, 1e-12));
    prev = cur;
  }
  return roots;
}

}  // namespace detail

// Translates the spec so that f'(0) = 0 and derives the anchors. Roots of
// 2 f' -+ g are taken as the first ones in (0,1); t_sharp is wrapped by -1 to
// satisfy the ordering -1 <= t_sharp < 0 < t_star <= 1.
inline std::pair<ForcingSpec, Anchors> normalize(const ForcingSpec& spec) {
  const double g = spec.g();
  // hypothesis: max 2 f' >= g and min 2 f' <= -g
  double hi = -1e300, lo = 1e300;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double d = spec.eval(static_cast<double>(i) / n).fdot;
    hi = std::max(hi, d);
    lo = std::min(lo, d);
  }
  hi = spec.max_abs_fdot() >= hi ? spec.max_abs_fdot() : hi;  // refined sup of |f'| dominates
  if (2.0 * hi < g || 2.0 * lo > -g)
    throw Error(ErrorKind::HypothesisViolated, "racket", "normalize",
                "need max 2f' >= g and min 2f' <= -g");

  // shift so that f'(0) = 0
  ForcingSpec base = spec;
  if (std::abs(spec.eval(0.0).fdot) > 1e-13) {
    auto zeros = detail::period_roots([&](double t) { return spec.eval(t).fdot; });
    if (zeros.empty())
      throw Error(ErrorKind::HypothesisViolated, "racket", "normalize", "f' has no zero");
    base = spec.shifted(zeros.front());
  }

  auto star_roots = detail::period_roots([&](double t) { return 2.0 * base.eval(t).fdot - g; });
  auto sharp_roots = detail::period_roots([&](double t) { return 2.0 * base.eval(t).fdot + g; });
  if (star_roots.empty() || sharp_roots.empty())
    throw Error(ErrorKind::HypothesisViolated, "racket", "normalize",
                "no root of 2f' = +-g after normalization");

  Anchors anchors{};
  anchors.t_bar0 = 0.0;
  anchors.t_star = star_roots.front();
  anchors.t_sharp = sharp_roots.front() - 1.0;
  if (!(anchors.t_sharp >= -1.0 && anchors.t_sharp < 0.0 && anchors.t_star > 0.0 &&
        anchors.t_star <= 1.0))
    throw Error(ErrorKind::HypothesisViolated, "racket", "normalize", "anchor ordering failed");
  return {base, anchors};
}

}  // namespace bounce
