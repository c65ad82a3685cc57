#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.
// The interval with the largest error estimate is bisected until the summed
// estimate |K15 - G7| satisfies the tolerance; the refinement order depends
// only on the integrand, so results are deterministic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace socsec::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

struct Tolerance {
  double abs = 0.0;
  double rel = 1e-10;
  std::size_t max_intervals = 2000;
};

namespace detail {

inline constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], kNodes[3], kNodes[5], kNodes[7]
inline constexpr std::array<double, 4> kGauss{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F>
Piece gk15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double k = fc * kKronrod[7];
  double g = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double s = f(mid - dx) + f(mid + dx);
    k += kKronrod[j] * s;
    if (j % 2 == 1) g += kGauss[j / 2] * s;
  }
  return {a, b, k * half, std::abs((k - g) * half)};
}

}  // namespace detail

template <class F>
Result integrate(F&& f, double a, double b, Tolerance tol = {}) {
  if (a == b) return {0.0, 0.0, true};
  std::priority_queue<detail::Piece> heap;
  heap.push(detail::gk15(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  std::size_t count = 1;
  while (error > std::max(tol.abs, tol.rel * std::abs(value)) && count < tol.max_intervals) {
    const detail::Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Piece left = detail::gk15(f, worst.a, mid);
    const detail::Piece right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // re-sum to shed the drift of the running updates
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, error <= std::max(tol.abs, tol.rel * std::abs(value))};
}

namespace detail {

struct VectorPiece {
  double a, b, error;
  std::size_t slot;
  bool operator<(const VectorPiece& o) const { return error < o.error; }
};

}  // namespace detail

/// Adaptive GK15 for a vector integrand f(x, out) that writes `dim` values.
/// One subdivision serves all components; the worst component error of a
/// piece drives refinement and the stop rule is
/// max_j err_j <= max(abs, rel * max_j |value_j|).
template <class F>
Result integrate_vector(F&& f, double a, double b, std::size_t dim, std::vector<double>& value,
                        Tolerance tol = {}) {
  value.assign(dim, 0.0);
  if (a == b || dim == 0) return {0.0, 0.0, true};
  // per-piece value and error rows, indexed by slot
  std::vector<double> vals;
  std::vector<double> errs;
  std::vector<double> fx(dim), fy(dim), kk(dim), gg(dim);
  auto eval = [&](double lo, double hi) {
    const std::size_t slot = vals.size() / dim;
    vals.resize(vals.size() + dim);
    errs.resize(errs.size() + dim);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    f(mid, fx.data());
    for (std::size_t j = 0; j < dim; ++j) {
      kk[j] = fx[j] * detail::kKronrod[7];
      gg[j] = fx[j] * detail::kGauss[3];
    }
    for (int n = 0; n < 7; ++n) {
      const double dx = half * detail::kNodes[n];
      f(mid - dx, fx.data());
      f(mid + dx, fy.data());
      for (std::size_t j = 0; j < dim; ++j) {
        const double s = fx[j] + fy[j];
        kk[j] += detail::kKronrod[n] * s;
        if (n % 2 == 1) gg[j] += detail::kGauss[n / 2] * s;
      }
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      vals[slot * dim + j] = kk[j] * half;
      errs[slot * dim + j] = std::abs((kk[j] - gg[j]) * half);
      worst = std::max(worst, errs[slot * dim + j]);
    }
    return detail::VectorPiece{lo, hi, worst, slot};
  };

  std::priority_queue<detail::VectorPiece> heap;
  std::vector<double> total(dim, 0.0), total_err(dim, 0.0);
  auto add = [&](const detail::VectorPiece& p, double sign) {
    for (std::size_t j = 0; j < dim; ++j) {
      total[j] += sign * vals[p.slot * dim + j];
      total_err[j] += sign * errs[p.slot * dim + j];
    }
  };
  auto done = [&] {
    double scale = 0.0;
    double err = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      scale = std::max(scale, std::abs(total[j]));
      err = std::max(err, total_err[j]);
    }
    return std::pair{err, err <= std::max(tol.abs, tol.rel * scale)};
  };

  const auto first = eval(a, b);
  heap.push(first);
  add(first, 1.0);
  std::size_t count = 1;
  while (!done().second && count < tol.max_intervals) {
    const detail::VectorPiece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = eval(worst.a, mid);
    const auto right = eval(mid, worst.b);
    add(worst, -1.0);
    add(left, 1.0);
    add(right, 1.0);
    heap.push(left);
    heap.push(right);
    ++count;
  }
  std::fill(total.begin(), total.end(), 0.0);
  std::fill(total_err.begin(), total_err.end(), 0.0);
  // re-sum the surviving pieces in slot order so the result is independent
  // of heap layout
  std::vector<std::size_t> live;
  while (!heap.empty()) {
    live.push_back(heap.top().slot);
    heap.pop();
  }
  std::sort(live.begin(), live.end());
  for (std::size_t slot : live)
    for (std::size_t j = 0; j < dim; ++j) {
      total[j] += vals[slot * dim + j];
      total_err[j] += errs[slot * dim + j];
    }
  value = total;
  const auto [err, ok] = done();
  return {0.0, err, ok};
}

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(std::size_t n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace socsec::quad
