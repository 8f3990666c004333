#pragma once

// All constants of the construction. v_bar/K1 bound the map's domain, K/delta
// the twist floor, eps the cutoff width, C the gap-growth constant, M the
// envelope constant and (m, Q) the block parameters fixed by the inequality
// system of the gluing argument.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "bounce/errors.hpp"

namespace bounce {

struct ConstantsBundle {
  double g = 1.0;
  double v_bar = 0.0;
  double K1 = 0.0;
  double K = 0.0;
  double delta = 0.0;
  double eps = 1.0;
  double C = 0.0;
  double M = 0.0;
  std::int64_t m = 0;
  int Q = 0;

  // The four inequalities fixing (m, Q):
  //   (1) Q > 8M
  //   (2) Q(m+1) - 4M > QK + Q(Q-1)C/2
  //   (3) Q(m+2) - 4M > QK + Q(Q-1)C/2
  //   (4) QK + Q(Q-1)C/2 > 0
  static bool system_holds(double K, double C, double M, std::int64_t m, int Q) {
    const double q = static_cast<double>(Q);
    const double md = static_cast<double>(m);
    const double rhs = q * K + q * (q - 1.0) * 0.5 * C;
    return q > 8.0 * M && q * (md + 1.0) - 4.0 * M > rhs && q * (md + 2.0) - 4.0 * M > rhs &&
           rhs > 0.0;
  }

  bool m_large_enough() const {
    return static_cast<double>(m) > std::max(2.0 * v_bar / g, 2.0 * K + 9.0);
  }

  void validate() const {
    auto fail = [](const std::string& what) {
      throw Error(ErrorKind::InvalidConstants, "generating", "ConstantsBundle", what);
    };
    if (!(g > 0.0)) fail("g must be positive");
    if (!(delta > 0.0 && eps > 0.0 && C > 0.0 && M > 0.0)) fail("delta, eps, C, M must be positive");
    if (!(K >= K1 + 2.0 * eps)) fail("need K >= K1 + 2*eps");
    if (m != 0 || Q != 0) {
      if (!system_holds(K, C, M, m, Q)) fail("(m, Q) violate the inequality system");
      if (!m_large_enough()) fail("m below max(2 v_bar/g, 2K+9)");
    }
  }
};

}  // namespace bounce
