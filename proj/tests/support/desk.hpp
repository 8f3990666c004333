#pragma once

// Shared fixtures: the desk-scale forcing f(t) = 0.2 cos(2 pi t) with g = 1,
// the constants bundle pinned for the acceptance-scale runs, and small
// helpers used across suites.

#include <random>

#include "bounce/constants.hpp"
#include "bounce/extension.hpp"
#include "bounce/forcing.hpp"

namespace testsupport {

inline bounce::ForcingSpec desk_spec() { return bounce::ForcingSpec(1.0, {0.2}, {}); }

inline bounce::ForcingSpec flat_spec() { return bounce::ForcingSpec(1.0, {}, {}); }

// Anchors of the desk instance, re-derived independently in test_forcing and
// frozen here to full double precision for the other suites.
inline constexpr double kDeskTStar = 0.56512825909850125;
inline constexpr double kDeskTSharp = -0.93487174090149875;

inline bounce::Anchors desk_anchors() { return {0.0, kDeskTStar, kDeskTSharp}; }

// Bundle used by the block-scale runs: (m, Q) = (196, 14) from the constants
// solver on (K, C, M) = (3, 6, 1.69). K1/v_bar are relaxed so that the
// decelerating orbit stays inside the step domain down to its last index.
inline bounce::ConstantsBundle pinned_bundle() {
  bounce::ConstantsBundle c;
  c.g = 1.0;
  c.v_bar = 2.5;
  c.K1 = 1.0;
  c.K = 3.0;
  c.delta = 0.5;
  c.eps = 1.0;
  c.C = 6.0;
  c.M = 1.69;
  c.m = 196;
  c.Q = 14;
  c.validate();
  return c;
}

// Same bundle for the integrable case (anchored constants are forcing-free).
inline bounce::ConstantsBundle flat_bundle() { return pinned_bundle(); }

inline bounce::ExtensionField desk_field() {
  return bounce::ExtensionField(desk_spec(), pinned_bundle());
}

}  // namespace testsupport
