#pragma once

#include <complex>
#include <vector>

#include "roomgreen/core.hpp"

namespace testsupport {

using roomgreen::Complex;

inline roomgreen::AxisBoundary axis(double length, Complex beta_minus, Complex beta_plus) {
  return {length, roomgreen::Admittance::constant(beta_minus),
          roomgreen::Admittance::constant(beta_plus)};
}

inline roomgreen::RoomSpec room_1d(double length, Complex beta_minus, Complex beta_plus) {
  roomgreen::RoomSpec r;
  r.axes = {axis(length, beta_minus, beta_plus)};
  return r;
}

/// 1.0 m × 1.4 m room with normalized impedances 10−3i, 6 (x walls) and
/// 12−5i, 4−4i (y walls).
inline roomgreen::RoomSpec room_2d_impedance() {
  using roomgreen::Admittance;
  roomgreen::RoomSpec r;
  r.axes = {{1.0, Admittance::from_impedance({10.0, -3.0}), Admittance::from_impedance({6.0, 0.0})},
            {1.4, Admittance::from_impedance({12.0, -5.0}), Admittance::from_impedance({4.0, -4.0})}};
  return r;
}

struct WallCase {
  Complex beta_minus;
  Complex beta_plus;
  double a12;
  double a11p;
  std::vector<Complex> roots;  // high-precision reference values, |q̂| ≤ 8.5
};

// l = 1 m, f = 5000 Hz, c = 343 m/s. Root values from a 50-digit
// evaluation of the characteristic function.
inline std::vector<WallCase> wall_cases() {
  return {
      {{0.01, 0.01}, {0.02, 0.0}, 0.490319, 0.921947, {
           {0.33248937, 0.42233399}, {1.00099476, 0.29319395}, {1.96339687, 0.1468125},
           {2.9716656, 0.09522292},  {3.97785106, 0.07063932}, {4.98196741, 0.05621577},
           {5.98483514, 0.04671125}, {6.9869316, 0.03996796},  {7.98852585, 0.03493195}}},
      {{0.1, 0.1}, {0.2, 0.07}, 5.046903, 10.053026, {
           {1.06618114, 0.11805043}, {2.14534128, 0.23266867}, {2.91545175, 2.91545163},
           {3.24517517, 0.33289772}, {4.36067549, 0.41079362}, {5.5010456, 0.46281738},
           {5.83101353, 2.04082533}, {6.64693202, 0.44168505}, {7.73299232, 0.38437764}}},
      {{0.1, 0.06}, {0.0, 0.0}, 0.0, 3.399972, {
           {0.52198665, 0.04410358}, {1.57666644, 0.13406318}, {2.67115326, 0.21270974},
           {2.91556649, 1.74927227}, {3.78694012, 0.21933223}, {4.85309456, 0.18589663},
           {5.88777258, 0.15635948}, {6.9086814, 0.13409236},  {7.92271054, 0.11718812}}},
  };
}

}  // namespace testsupport
