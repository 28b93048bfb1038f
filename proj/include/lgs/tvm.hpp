#pragma once

#include "lgs/types.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lgs {

/// Outcome of one total-variation run. `objective` holds the ROF objective
/// after each dual iteration; tests assert it never increases.
struct TvmPlaneResult {
  Plane plane;
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective;
};

struct TvmResult {
  Image image;
  bool converged = false;  ///< all three channels met the tolerance
  int iterations = 0;      ///< max over channels
};

namespace detail {

// Isotropic discrete TV with forward differences and Neumann boundary.
inline double totalVariation(const Plane& u) {
  const Index h = u.rows(), w = u.cols();
  double tv = 0;
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      const double gx = (i + 1 < h) ? u(i + 1, j) - u(i, j) : 0.0;
      const double gy = (j + 1 < w) ? u(i, j + 1) - u(i, j) : 0.0;
      tv += std::sqrt(gx * gx + gy * gy);
    }
  return tv;
}

inline double rofObjective(const Plane& u, const Plane& x, double lambda) {
  const double fidelity = ((u - x) * (u - x)).sum() / (2.0 * lambda);
  return fidelity + totalVariation(u);
}

}  // namespace detail

/// Chambolle's dual projection for the ROF model
///   min_u  ||u - x||^2 / (2 * lambda) + TV(u).
/// Stops when the relative objective change drops below tol or after
/// maxIters iterations; if the objective ever rises the previous (best)
/// iterate is returned and the run is marked non-converged.
inline TvmPlaneResult tvmDenoisePlane(const Plane& x, double lambda, int maxIters,
                                      double tol) {
  if (!(lambda > 0)) throw std::invalid_argument("tvmDenoise: weight must be > 0");
  if (maxIters < 1) throw std::invalid_argument("tvmDenoise: maxIters must be >= 1");
  const Index h = x.rows(), w = x.cols();
  const double tau = 0.25;

  Plane p1 = Plane::Zero(h, w), p2 = Plane::Zero(h, w);
  Plane div = Plane::Zero(h, w), u = x;
  TvmPlaneResult res;
  double prevObj = detail::rofObjective(u, x, lambda);  // == TV(x)

  for (int it = 1; it <= maxIters; ++it) {
    // w = div p - x / lambda; dual ascent step on grad w, reprojected.
    const Plane wfield = div - x / lambda;
    Plane g1 = Plane::Zero(h, w), g2 = Plane::Zero(h, w);
    g1.block(0, 0, h - 1, w) = wfield.block(1, 0, h - 1, w) - wfield.block(0, 0, h - 1, w);
    g2.block(0, 0, h, w - 1) = wfield.block(0, 1, h, w - 1) - wfield.block(0, 0, h, w - 1);
    const Plane denom = 1.0 + tau * (g1 * g1 + g2 * g2).sqrt();
    p1 = (p1 + tau * g1) / denom;
    p2 = (p2 + tau * g2) / denom;

    div.setZero();
    div += p1;
    div.block(1, 0, h - 1, w) -= p1.block(0, 0, h - 1, w);
    div += p2;
    div.block(0, 1, h, w - 1) -= p2.block(0, 0, h, w - 1);

    const Plane candidate = x - lambda * div;
    const double obj = detail::rofObjective(candidate, x, lambda);
    res.iterations = it;
    if (obj > prevObj) {  // keep the best iterate
      res.converged = false;
      break;
    }
    u = candidate;
    res.objective.push_back(obj);
    const double rel = (prevObj - obj) / std::max(prevObj, 1e-300);
    prevObj = obj;
    if (rel < tol) {
      res.converged = true;
      break;
    }
  }
  res.plane = u.min(1.0).max(0.0);
  return res;
}

/// Per-channel ROF denoising. `weight` follows the convention where larger
/// values smooth more; it maps to the [0,1] data scale as weight / 255.
inline TvmResult tvmDenoise(const Image& img, double weight, int maxIters = 200,
                            double tol = 2e-4) {
  if (!(weight > 0)) throw std::invalid_argument("tvmDenoise: weight must be > 0");
  const double lambda = weight / 255.0;
  TvmResult out;
  out.converged = true;
  for (int c = 0; c < 3; ++c) {
    TvmPlaneResult r = tvmDenoisePlane(img.channel(c), lambda, maxIters, tol);
    out.image.channel(c) = std::move(r.plane);
    out.converged = out.converged && r.converged;
    out.iterations = std::max(out.iterations, r.iterations);
  }
  return out;
}

}  // namespace lgs
