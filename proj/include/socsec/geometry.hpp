#pragma once

// Planar regions, homogeneous PPP sampling and radial-kernel integration.
//
// Integrals of the form  I = \int_region k(max(|x - pole|, guard)) dx  are
// evaluated in polar coordinates about the pole. For each direction phi the
// ray pole + t u(phi) is clipped against the region boundary (circles and
// sector edges) to a union of t-intervals, on which the radial measure
// k(t) t dt is integrated in closed form by the kernel. The remaining
// one-dimensional angular integral is piecewise smooth with kinks only at
// directions that graze a circle or hit a corner, so it is split there and
// handed to adaptive Gauss-Kronrod.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "socsec/errors.hpp"
#include "socsec/quadrature.hpp"
#include "socsec/random.hpp"

namespace socsec {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Disk {
  Point center;
  double radius = 0.0;
};

struct Annulus {
  Point center;
  double inner = 0.0;
  double outer = 0.0;
};

/// Annular sector: radii [inner, outer], polar angles [angle_lo, angle_hi]
/// measured about the center.
struct FlabellateAnnulus {
  Point center;
  double inner = 0.0;
  double outer = 0.0;
  double angle_lo = 0.0;
  double angle_hi = 0.0;
};

using Region = std::variant<Disk, Annulus, FlabellateAnnulus>;

/// Annulus with a disk removed; the exact jammer domain.
struct PuncturedAnnulus {
  Annulus annulus;
  Disk hole;
};

/// Three annular sectors approximating Annulus(L1, L2) minus Disk((d,0), LG).
struct DbarDecomposition {
  std::array<FlabellateAnnulus, 3> pieces;
  double sector_half_angle = 0.0;
};

// ---------------------------------------------------------------------------
// Validation, area, containment

namespace detail {

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Angle of v relative to lo, mapped into [0, 2pi).
inline double relative_angle(double angle, double lo) {
  double rel = std::fmod(angle - lo, kTwoPi);
  if (rel < 0.0) rel += kTwoPi;
  return rel;
}

}  // namespace detail

inline void validate(const Disk& d) {
  if (!detail::finite(d.center) || !(d.radius > 0.0) || !std::isfinite(d.radius))
    throw GeometryError("disk radius must be positive and finite");
}

inline void validate(const Annulus& a) {
  if (!detail::finite(a.center) || !(a.inner >= 0.0) || !(a.inner < a.outer) || !std::isfinite(a.outer))
    throw GeometryError("annulus requires 0 <= inner < outer");
}

inline void validate(const FlabellateAnnulus& f) {
  validate(Annulus{f.center, f.inner, f.outer});
  if (!(f.angle_lo < f.angle_hi) || f.angle_hi > f.angle_lo + kTwoPi + 1e-12)
    throw GeometryError("sector requires angle_lo < angle_hi <= angle_lo + 2pi");
}

inline void validate(const PuncturedAnnulus& p) {
  validate(p.annulus);
  validate(p.hole);
}

inline void validate(const Region& r) {
  std::visit([](const auto& v) { validate(v); }, r);
}

inline double area(const Disk& d) { return std::numbers::pi * d.radius * d.radius; }

inline double area(const Annulus& a) { return std::numbers::pi * (a.outer * a.outer - a.inner * a.inner); }

inline double area(const FlabellateAnnulus& f) {
  return 0.5 * (f.angle_hi - f.angle_lo) * (f.outer * f.outer - f.inner * f.inner);
}

inline double area(const Region& r) {
  return std::visit([](const auto& v) { return area(v); }, r);
}

inline double area(const DbarDecomposition& d) {
  double total = 0.0;
  for (const auto& p : d.pieces) total += area(p);
  return total;
}

inline bool contains(const Disk& d, Point p) { return distance(p, d.center) <= d.radius; }

inline bool contains(const Annulus& a, Point p) {
  const double r = distance(p, a.center);
  return r >= a.inner && r <= a.outer;
}

inline bool contains(const FlabellateAnnulus& f, Point p) {
  const double r = distance(p, f.center);
  if (r < f.inner || r > f.outer) return false;
  const double ang = std::atan2(p.y - f.center.y, p.x - f.center.x);
  return detail::relative_angle(ang, f.angle_lo) <= f.angle_hi - f.angle_lo;
}

inline bool contains(const PuncturedAnnulus& s, Point p) {
  return contains(s.annulus, p) && distance(p, s.hole.center) >= s.hole.radius;
}

inline bool contains(const DbarDecomposition& d, Point p) {
  return std::ranges::any_of(d.pieces, [p](const auto& piece) { return contains(piece, p); });
}

inline bool contains(const Region& r, Point p) {
  return std::visit([p](const auto& v) { return contains(v, p); }, r);
}

// ---------------------------------------------------------------------------
// Uniform and PPP sampling

template <class Rng>
Point sample_uniform(const Disk& d, Rng& rng) {
  const double r = d.radius * std::sqrt(uniform01(rng));
  const double phi = kTwoPi * uniform01(rng);
  return {d.center.x + r * std::cos(phi), d.center.y + r * std::sin(phi)};
}

template <class Rng>
Point sample_uniform(const Annulus& a, Rng& rng) {
  const double r2 = a.inner * a.inner + uniform01(rng) * (a.outer * a.outer - a.inner * a.inner);
  const double r = std::sqrt(r2);
  const double phi = kTwoPi * uniform01(rng);
  return {a.center.x + r * std::cos(phi), a.center.y + r * std::sin(phi)};
}

template <class Rng>
Point sample_uniform(const FlabellateAnnulus& f, Rng& rng) {
  const double r2 = f.inner * f.inner + uniform01(rng) * (f.outer * f.outer - f.inner * f.inner);
  const double r = std::sqrt(r2);
  const double phi = f.angle_lo + (f.angle_hi - f.angle_lo) * uniform01(rng);
  return {f.center.x + r * std::cos(phi), f.center.y + r * std::sin(phi)};
}

template <class Rng>
Point sample_uniform(const Region& region, Rng& rng) {
  return std::visit([&rng](const auto& v) { return sample_uniform(v, rng); }, region);
}

/// One realization of a homogeneous PPP with the given density on the region.
template <class Rng>
std::vector<Point> sample_ppp(const Region& region, double density, Rng& rng) {
  if (!(density >= 0.0)) throw DomainError("PPP density must be nonnegative");
  std::vector<Point> points;
  if (density == 0.0) return points;
  const auto n = poisson(rng, density * area(region));
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) points.push_back(sample_uniform(region, rng));
  return points;
}

// ---------------------------------------------------------------------------
// Radial kernels: segment(a, b) = \int_a^b k(max(t, guard)) t dt

/// k(t) = t^{-s}, flattened to guard^{-s} inside the guard radius.
struct PowerKernel {
  double exponent = 0.0;
  double guard = 0.0;

  [[nodiscard]] double segment(double a, double b) const {
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    if (a < guard) {
      const double top = std::min(b, guard);
      acc += std::pow(guard, -exponent) * 0.5 * (top * top - a * a);
      a = top;
      if (!(b > a)) return acc;
    }
    const double s = exponent;
    if (a == 0.0) {
      if (s >= 2.0) throw NonConvergent("radial integral diverges: pole inside region with exponent >= 2 and no guard");
      return acc + std::pow(b, 2.0 - s) / (2.0 - s);
    }
    if (s == 2.0) return acc + std::log(b / a);
    return acc + (std::pow(b, 2.0 - s) - std::pow(a, 2.0 - s)) / (2.0 - s);
  }
};

/// k(t) = 1 / (1 + scale * t^alpha), flattened inside the guard radius.
/// This is the jammer PGFL kernel  beta P_j t^-alpha / (S + beta P_j t^-alpha)
/// with scale = S / (beta P_j).
struct SaturatingKernel {
  double scale = 0.0;
  double alpha = 4.0;
  double guard = 0.0;

  [[nodiscard]] double value(double t) const { return 1.0 / (1.0 + scale * std::pow(std::max(t, guard), alpha)); }

  [[nodiscard]] double segment(double a, double b) const {
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    if (a < guard) {
      const double top = std::min(b, guard);
      acc += value(guard) * 0.5 * (top * top - a * a);
      a = top;
      if (!(b > a)) return acc;
    }
    if (alpha == 4.0) {
      const double r = std::sqrt(scale);
      if (r == 0.0) return acc + 0.5 * (b * b - a * a);
      // atan(u) - atan(v) = atan((u - v) / (1 + u v)) for u, v >= 0
      const double u = r * b * b;
      const double v = r * a * a;
      return acc + std::atan((u - v) / (1.0 + u * v)) / (2.0 * r);
    }
    auto f = [this](double t) { return t / (1.0 + scale * std::pow(t, alpha)); };
    return acc + quad::integrate(f, a, b, {0.0, 1e-12, 200}).value;
  }
};

// ---------------------------------------------------------------------------
// Boundary description used by the ray clipping

struct Circle {
  Point center;
  double radius = 0.0;
};

/// Sector edge: the half-line center + s (cos angle, sin angle), s >= 0.
struct Ray {
  Point origin;
  double angle = 0.0;
};

struct Boundary {
  std::vector<Circle> circles;
  std::vector<Ray> edges;
};

inline Boundary boundary(const Disk& d) { return {{{d.center, d.radius}}, {}}; }

inline Boundary boundary(const Annulus& a) {
  Boundary b{{{a.center, a.outer}}, {}};
  if (a.inner > 0.0) b.circles.push_back({a.center, a.inner});
  return b;
}

inline Boundary boundary(const FlabellateAnnulus& f) {
  Boundary b = boundary(Annulus{f.center, f.inner, f.outer});
  if (f.angle_hi - f.angle_lo < kTwoPi) {
    b.edges.push_back({f.center, f.angle_lo});
    b.edges.push_back({f.center, f.angle_hi});
  }
  return b;
}

inline Boundary boundary(const PuncturedAnnulus& p) {
  Boundary b = boundary(p.annulus);
  b.circles.push_back({p.hole.center, p.hole.radius});
  return b;
}

inline Boundary boundary(const Region& r) {
  return std::visit([](const auto& v) { return boundary(v); }, r);
}

namespace detail {

inline double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

/// Distances t > 0 at which the ray from `pole` along (ux, uy) crosses the boundary.
inline void ray_crossings(const Boundary& b, Point pole, double ux, double uy, std::vector<double>& out) {
  for (const auto& c : b.circles) {
    const double px = pole.x - c.center.x;
    const double py = pole.y - c.center.y;
    const double half_b = ux * px + uy * py;
    const double cc = px * px + py * py - c.radius * c.radius;
    const double disc = half_b * half_b - cc;
    if (disc <= 0.0) continue;
    const double root = std::sqrt(disc);
    for (double t : {-half_b - root, -half_b + root})
      if (t > 0.0) out.push_back(t);
  }
  for (const auto& e : b.edges) {
    const double vx = std::cos(e.angle);
    const double vy = std::sin(e.angle);
    const double den = cross(ux, uy, vx, vy);
    if (std::abs(den) < 1e-15) continue;
    const double wx = e.origin.x - pole.x;
    const double wy = e.origin.y - pole.y;
    const double t = cross(wx, wy, vx, vy) / den;
    const double s = cross(wx, wy, ux, uy) / den;
    if (t > 0.0 && s >= 0.0) out.push_back(t);
  }
}

/// Directions (from the pole) where the clipped ray length is not smooth.
inline void angular_breaks(const Boundary& b, Point pole, std::vector<double>& out) {
  auto push_dir = [&](double x, double y) {
    if (std::hypot(x - pole.x, y - pole.y) > 0.0) out.push_back(std::atan2(y - pole.y, x - pole.x));
  };
  for (const auto& c : b.circles) {
    const double dist = distance(pole, c.center);
    if (dist > c.radius) {
      const double base = std::atan2(c.center.y - pole.y, c.center.x - pole.x);
      const double half = std::asin(c.radius / dist);
      out.push_back(base - half);
      out.push_back(base + half);
    }
  }
  for (const auto& e : b.edges) {
    const double vx = std::cos(e.angle);
    const double vy = std::sin(e.angle);
    out.push_back(e.angle);
    out.push_back(e.angle + std::numbers::pi);
    push_dir(e.origin.x, e.origin.y);
    for (const auto& c : b.circles) {
      // corners: edge / circle intersections
      const double px = e.origin.x - c.center.x;
      const double py = e.origin.y - c.center.y;
      const double half_b = vx * px + vy * py;
      const double disc = half_b * half_b - (px * px + py * py - c.radius * c.radius);
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      for (double s : {-half_b - root, -half_b + root})
        if (s >= 0.0) push_dir(e.origin.x + s * vx, e.origin.y + s * vy);
    }
  }
}

/// Sorted panel edges on [0, 2pi] for the angular integral about `pole`.
inline std::vector<double> angular_panels(const Boundary& b, Point pole) {
  std::vector<double> breaks;
  angular_breaks(b, pole, breaks);
  for (double& a : breaks) a = relative_angle(a, 0.0);
  breaks.push_back(0.0);
  breaks.push_back(kTwoPi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double x, double y) { return y - x < 1e-13; }),
               breaks.end());
  breaks.back() = kTwoPi;
  return breaks;
}

}  // namespace detail

/// Clip the ray from `pole` in direction `phi` against the shape: appends
/// the inside intervals [t0, t1] (t >= 0) to `out`.
template <class Shape>
void clip_ray(const Shape& shape, const Boundary& b, Point pole, double phi,
              std::vector<std::pair<double, double>>& out, std::vector<double>& scratch) {
  const double ux = std::cos(phi);
  const double uy = std::sin(phi);
  scratch.clear();
  scratch.push_back(0.0);
  detail::ray_crossings(b, pole, ux, uy, scratch);
  std::sort(scratch.begin(), scratch.end());
  for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
    const double t0 = scratch[i];
    const double t1 = scratch[i + 1];
    if (!(t1 > t0)) continue;
    const double mid = 0.5 * (t0 + t1);
    if (!contains(shape, Point{pole.x + mid * ux, pole.y + mid * uy})) continue;
    if (!out.empty() && out.back().second == t0)
      out.back().second = t1;
    else
      out.emplace_back(t0, t1);
  }
}

struct QuadratureControl {
  double rel_tol = 1e-10;
  /// Absolute target, used by the batched integrator only.
  double abs_tol = 0.0;
  std::size_t max_intervals = 400;
  /// Accepted relative error of the whole integral before NonConvergent.
  double fail_rel = 1e-6;
};

/// \int_shape k(max(|x - pole|, guard)) dx for a kernel with a closed-form
/// radial segment integral.
template <class Shape, class Kernel>
double integrate_radial(const Shape& shape, Point pole, const Kernel& kernel, QuadratureControl ctl = {}) {
  const Boundary b = boundary(shape);
  const std::vector<double> breaks = detail::angular_panels(b, pole);

  std::vector<std::pair<double, double>> segs;
  std::vector<double> scratch;
  auto angular = [&](double phi) {
    segs.clear();
    clip_ray(shape, b, pole, phi, segs, scratch);
    double acc = 0.0;
    for (const auto& [t0, t1] : segs) acc += kernel.segment(t0, t1);
    return acc;
  };

  double total = 0.0;
  double err_total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto r = quad::integrate(angular, breaks[i], breaks[i + 1], {0.0, ctl.rel_tol, ctl.max_intervals});
    total += r.value;
    err_total += r.error;
  }
  if (!std::isfinite(total) || err_total > ctl.fail_rel * std::abs(total))
    throw NonConvergent("angular quadrature did not reach 1e-6 relative accuracy");
  return total;
}

template <class Kernel>
double integrate_radial(const Region& region, Point pole, const Kernel& kernel, QuadratureControl ctl = {}) {
  return std::visit([&](const auto& v) { return integrate_radial(v, pole, kernel, ctl); }, region);
}

template <class Kernel>
double integrate_radial(const DbarDecomposition& d, Point pole, const Kernel& kernel, QuadratureControl ctl = {}) {
  double total = 0.0;
  for (const auto& piece : d.pieces) total += integrate_radial(piece, pole, kernel, ctl);
  return total;
}

/// Integrates a family of kernels over one shape with a shared angular
/// subdivision. A batch kernel exposes size() and add_segment(a, b, out),
/// which adds the radial segment integral of every member into out[0..size).
/// Results are added into `out`.
template <class Shape, class BatchKernel>
void integrate_radial_batch(const Shape& shape, Point pole, const BatchKernel& kernel, std::vector<double>& out,
                            QuadratureControl ctl = {}) {
  const std::size_t dim = kernel.size();
  out.resize(dim, 0.0);
  const Boundary b = boundary(shape);
  const std::vector<double> breaks = detail::angular_panels(b, pole);
  std::vector<std::pair<double, double>> segs;
  std::vector<double> scratch;
  auto angular = [&](double phi, double* acc) {
    std::fill(acc, acc + dim, 0.0);
    segs.clear();
    clip_ray(shape, b, pole, phi, segs, scratch);
    for (const auto& [t0, t1] : segs) kernel.add_segment(t0, t1, acc);
  };
  std::vector<double> part;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto r = quad::integrate_vector(angular, breaks[i], breaks[i + 1], dim, part,
                                          {ctl.abs_tol, ctl.rel_tol, ctl.max_intervals});
    if (!r.converged && r.error > ctl.fail_rel * std::max(1.0, std::abs(part[0])))
      throw NonConvergent("batched angular quadrature did not converge");
    for (std::size_t j = 0; j < dim; ++j) out[j] += part[j];
  }
}

template <class BatchKernel>
void integrate_radial_batch(const DbarDecomposition& d, Point pole, const BatchKernel& kernel,
                            std::vector<double>& out, QuadratureControl ctl = {}) {
  for (const auto& piece : d.pieces) integrate_radial_batch(piece, pole, kernel, out, ctl);
}

/// Saturating kernels 1 / (1 + scale_j t^alpha) sharing alpha and guard.
struct SaturatingBatch {
  std::vector<double> scales;
  double alpha = 4.0;
  double guard = 0.0;

  [[nodiscard]] std::size_t size() const { return scales.size(); }

  void add_segment(double a, double b, double* out) const {
    for (std::size_t j = 0; j < scales.size(); ++j) out[j] += SaturatingKernel{scales[j], alpha, guard}.segment(a, b);
  }
};

/// \int_region max(|x - pole|, guard)^{-exponent} dx.
/// Throws NonConvergent when the pole lies in the closed region, guard == 0
/// and exponent >= 2.
inline double radial_integral(const Region& region, Point pole, double exponent, double guard = 0.0) {
  if (!(exponent > 0.0)) throw DomainError("radial_integral exponent must be positive");
  if (!(guard >= 0.0)) throw DomainError("radial_integral guard must be nonnegative");
  validate(region);
  if (guard == 0.0 && exponent >= 2.0 && contains(region, pole))
    throw NonConvergent("radial integral diverges: pole inside region with exponent >= 2 and no guard");
  return integrate_radial(region, pole, PowerKernel{exponent, guard});
}

/// Flabellate-annulus approximation of the jammer domain.
///
/// The sector half-angle arcsin(LG / d) is the angle subtended at the origin
/// by the protected disk around (d, 0). A1 and A2 are the parts of that
/// sector inside and outside the protected zone's radial span; A3 is the
/// rest of the annulus.
inline DbarDecomposition dbar_decompose(double L1, double L2, double d, double LG) {
  if (!(LG > 0.0) || !(L1 >= 0.0) || !(L1 < d - LG) || !(d + LG < L2))
    throw GeometryError("dbar_decompose requires LG > 0, L1 < d - LG and d + LG < L2");
  const double half = std::asin(LG / d);
  const Point origin{};
  DbarDecomposition out;
  out.sector_half_angle = half;
  out.pieces[0] = FlabellateAnnulus{origin, L1, d - LG, -half, half};
  out.pieces[1] = FlabellateAnnulus{origin, d + LG, L2, -half, half};
  out.pieces[2] = FlabellateAnnulus{origin, L1, L2, half, kTwoPi - half};
  return out;
}

}  // namespace socsec
