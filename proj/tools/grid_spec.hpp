#pragma once

#include <string>
#include <vector>

#include "stieltjes/numerics.hpp"

namespace stieltjes::cli {

inline constexpr double kAxisMargin = 1e-3;

// Grid specs:
//   arcs:N          N points on |l| = 0.5 and |l| = 2, arg in [0.2, 2pi - 0.2]
//   left:N          N points on the same radii, arg in [pi/2 + 0.1, 3pi/2 - 0.1]
//   points:a,b;c,d  explicit points a + bi, c + di
// Points closer than kAxisMargin to [0, inf) are rejected (ParseError).
std::vector<Complex> parse_grid(const std::string& spec);

double distance_to_positive_axis(Complex l);

}  // namespace stieltjes::cli
