#pragma once

#include <array>
#include <cstddef>

namespace fdelab::averaging {

namespace detail {

inline constexpr std::array<double, 5> kGl5Nodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144,  0.9061798459386639927976269,
};
inline constexpr std::array<double, 5> kGl5Weights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640,
};

}  // namespace detail

template <typename F>
double gauss_legendre5(F&& f, double a, double b, std::size_t panels) {
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) acc += detail::kGl5Weights[k] * f(mid + 0.5 * width * detail::kGl5Nodes[k]);
    total += 0.5 * width * acc;
  }
  return total;
}

}  // namespace fdelab::averaging
