#pragma once

#include "lgs/types.hpp"

namespace lgs {

/// Magnitude of first-order image gradients, sqrt(da^2 + db^2).
///
/// Central differences (v[i+1] - v[i-1]) / 2 at interior pixels, one-sided
/// full-step differences at the two border lines. A 1xN or Nx1 input has no
/// neighbors along one axis; that derivative is zero there.
template <typename Derived>
PlaneT<typename Derived::Scalar> gradientMagnitude(const Eigen::ArrayBase<Derived>& plane) {
  using S = typename Derived::Scalar;
  const Index h = plane.rows();
  const Index w = plane.cols();

  PlaneT<S> dh = PlaneT<S>::Zero(h, w);  // horizontal (along columns)
  PlaneT<S> dv = PlaneT<S>::Zero(h, w);  // vertical (along rows)

  if (w >= 2) {
    dh.block(0, 1, h, w - 2) =
        (plane.block(0, 2, h, w - 2) - plane.block(0, 0, h, w - 2)) * S(0.5);
    dh.col(0) = plane.col(1) - plane.col(0);
    dh.col(w - 1) = plane.col(w - 1) - plane.col(w - 2);
  }
  if (h >= 2) {
    dv.block(1, 0, h - 2, w) =
        (plane.block(2, 0, h - 2, w) - plane.block(0, 0, h - 2, w)) * S(0.5);
    dv.row(0) = plane.row(1) - plane.row(0);
    dv.row(h - 1) = plane.row(h - 1) - plane.row(h - 2);
  }
  return (dh * dh + dv * dv).sqrt();
}

/// Min-max normalization to [0, 1]. A constant map normalizes to all zeros:
/// it carries no localized high-frequency evidence, so the defense must
/// degrade to identity on it.
template <typename Derived>
PlaneT<typename Derived::Scalar> normalizeMinMax(const Eigen::ArrayBase<Derived>& g) {
  using S = typename Derived::Scalar;
  const S lo = g.minCoeff();
  const S hi = g.maxCoeff();
  if (!(hi > lo)) return PlaneT<S>::Zero(g.rows(), g.cols());
  return (g - lo) / (hi - lo);
}

}  // namespace lgs
