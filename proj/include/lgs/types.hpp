#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>

namespace lgs {

/// Dense row-major scalar raster. Image planes hold values in [0, 1];
/// gradient maps hold non-negative magnitudes.
template <typename Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Plane = PlaneT<double>;
using GradMap = Plane;

/// Per-pixel {0,1} mask. Stored as uint8 so masks stay cheap to combine.
using Mask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Eigen::Index;

/// Three equally sized planes in [0, 1].
struct Image {
  Plane r, g, b;

  Image() = default;
  Image(Plane red, Plane green, Plane blue)
      : r(std::move(red)), g(std::move(green)), b(std::move(blue)) {
    if (r.rows() != g.rows() || r.rows() != b.rows() || r.cols() != g.cols() ||
        r.cols() != b.cols()) {
      throw std::invalid_argument("Image: planes must share dimensions");
    }
  }

  Index rows() const { return r.rows(); }
  Index cols() const { return r.cols(); }
  Index size() const { return r.size(); }

  static Image constant(Index rows, Index cols, double value) {
    return Image(Plane::Constant(rows, cols, value), Plane::Constant(rows, cols, value),
                 Plane::Constant(rows, cols, value));
  }

  /// Replicate one plane across all three channels.
  static Image fromGray(const Plane& p) { return Image(p, p, p); }

  const Plane& channel(int i) const { return i == 0 ? r : (i == 1 ? g : b); }
  Plane& channel(int i) { return i == 0 ? r : (i == 1 ? g : b); }
};

/// Rec. 601 luminance, clamped to [0, 1]. The addition order makes the
/// weights sum to exactly 1.0 in doubles, so white maps to white.
template <typename DR, typename DG, typename DB>
PlaneT<typename DR::Scalar> luminance(const Eigen::ArrayBase<DR>& r,
                                      const Eigen::ArrayBase<DG>& g,
                                      const Eigen::ArrayBase<DB>& b) {
  using S = typename DR::Scalar;
  return (S(0.299) * r + S(0.114) * b + S(0.587) * g).min(S(1)).max(S(0));
}

inline Plane luminance(const Image& img) { return luminance(img.r, img.g, img.b); }

}  // namespace lgs
