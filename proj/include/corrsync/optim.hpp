#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>

namespace corrsync::optim {

template <std::size_t N>
using Point = std::array<double, N>;

template <std::size_t N>
struct SimplexResult {
  Point<N> x{};
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// Terminates when the spread of function values across the simplex falls
/// below ftol * |f_best| + atol, or after max_iter iterations.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, const Point<N>& start, const Point<N>& step,
                             double ftol = 1e-10, double atol = 1e-15,
                             int max_iter = 2000) {
  std::array<Point<N>, N + 1> simplex;
  std::array<double, N + 1> values;
  simplex[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i <= N; ++i) values[i] = f(simplex[i]);

  std::array<std::size_t, N + 1> order;
  SimplexResult<N> res;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[N - 1];

    if (std::abs(values[worst] - values[best]) <= ftol * std::abs(values[best]) + atol) {
      res.converged = true;
      break;
    }

    Point<N> centroid{};
    for (std::size_t k = 0; k < N; ++k) {
      const std::size_t idx = order[k];
      for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[idx][i] / static_cast<double>(N);
    }
    auto along = [&](double coef) {
      Point<N> p;
      for (std::size_t i = 0; i < N; ++i) {
        p[i] = centroid[i] + coef * (simplex[worst][i] - centroid[i]);
      }
      return p;
    };

    const Point<N> reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < values[best]) {
      const Point<N> expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Point<N> contracted = along(outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= N; ++k) {
      const std::size_t idx = order[k];
      for (std::size_t i = 0; i < N; ++i) {
        simplex[idx][i] = simplex[best][i] + 0.5 * (simplex[idx][i] - simplex[best][i]);
      }
      values[idx] = f(simplex[idx]);
    }
  }

  const auto it = std::min_element(values.begin(), values.end());
  res.x = simplex[static_cast<std::size_t>(it - values.begin())];
  res.fx = *it;
  return res;
}

/// Bisection for a sign change of `f` on [lo, hi]. Requires f(lo) and f(hi)
/// to have opposite signs; returns the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200) {
  const bool lo_negative = f(lo) < 0.0;
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace corrsync::optim
