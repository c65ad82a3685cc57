#pragma once

// One-realization synthesis of the second-phase received powers.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "socsec/geometry.hpp"
#include "socsec/params.hpp"
#include "socsec/random.hpp"

namespace socsec {

struct NodeSet {
  std::vector<Point> relays;
  std::vector<Point> jammers;
  std::vector<Point> eavesdroppers;
};

enum class CategorizeMode {
  /// Independent PPPs at the thinned intensities lambda_R and lambda_J.
  Thinned,
  /// One PPP at lambda with a uniform trust mark per node, then thresholded.
  TrustMarks,
};

/// max(d, guard)^(-alpha)
inline double path_gain(double dist, double alpha, double guard) {
  return std::pow(std::max(dist, guard), -alpha);
}

template <class Rng>
NodeSet categorize(const SystemParams& p, Rng& rng, CategorizeMode mode = CategorizeMode::Thinned) {
  NodeSet out;
  const Region disk = p.relay_region();
  const Region annulus = p.jammer_annulus();
  const Disk zone = p.protected_zone();
  if (mode == CategorizeMode::Thinned) {
    out.relays = sample_ppp(disk, p.lambda_r(), rng);
    out.jammers = sample_ppp(annulus, p.lambda_j(), rng);
  } else {
    for (const Point& x : sample_ppp(disk, p.lambda, rng))
      if (uniform01(rng) >= p.c1) out.relays.push_back(x);
    for (const Point& x : sample_ppp(annulus, p.lambda, rng)) {
      const double trust = uniform01(rng);
      if (trust >= p.c2 && trust < p.c1) out.jammers.push_back(x);
    }
  }
  std::erase_if(out.jammers, [&](const Point& x) { return distance(x, zone.center) < zone.radius; });
  out.eavesdroppers = sample_ppp(annulus, p.lambda_e, rng);
  return out;
}

/// Coherent distributed-beamforming power at the destination:
/// (sum sqrt(P_R) |H| d^(-alpha/2))^2 with |H|^2 ~ exp(1).
template <class Rng>
double signal_power_dest(std::span<const Point> relays, Point dest, double P_R, double alpha, Rng& rng,
                         double guard = 0.0) {
  double amplitude = 0.0;
  for (const Point& x : relays) {
    const double envelope = std::sqrt(exponential1(rng));
    amplitude += envelope * std::sqrt(path_gain(distance(x, dest), alpha, guard));
  }
  return P_R * amplitude * amplitude;
}

/// Beamforming leakage at an eavesdropper: conditionally exponential with
/// mean P_R * sum d^(-alpha).
template <class Rng>
double signal_power_eve(std::span<const Point> relays, Point eve, double P_R, double alpha, Rng& rng,
                        double guard = 0.0) {
  if (relays.empty()) return 0.0;
  double mean = 0.0;
  for (const Point& x : relays) mean += path_gain(distance(x, eve), alpha, guard);
  return P_R * mean * exponential1(rng);
}

/// Same quantity built from explicit per-relay complex channels:
/// |sum sqrt(P_R) H_z H_y^* / |H_y| d^(-alpha/2)|^2, H ~ CN(0, 1).
template <class Rng>
double signal_power_eve_phases(std::span<const Point> relays, Point eve, double P_R, double alpha, Rng& rng,
                               double guard = 0.0) {
  std::complex<double> acc{};
  const double s = std::sqrt(0.5);
  for (const Point& x : relays) {
    const std::complex<double> hz{s * standard_normal(rng), s * standard_normal(rng)};
    const std::complex<double> hy{s * standard_normal(rng), s * standard_normal(rng)};
    acc += hz * std::conj(hy) / std::abs(hy) * std::sqrt(path_gain(distance(x, eve), alpha, guard));
  }
  return P_R * std::norm(acc);
}

/// Aggregate jamming power sum P_j h max(d, guard)^(-alpha), h ~ exp(1).
template <class Rng>
double interference_power(std::span<const Point> jammers, Point receiver, double P_j, double alpha, double guard,
                          Rng& rng) {
  double acc = 0.0;
  for (const Point& x : jammers) acc += exponential1(rng) * path_gain(distance(x, receiver), alpha, guard);
  return P_j * acc;
}

/// T / I, with T > 0, I = 0 giving +inf and T = I = 0 giving 0.
inline double sir(double signal, double interference) {
  if (interference > 0.0) return signal / interference;
  return signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace socsec
