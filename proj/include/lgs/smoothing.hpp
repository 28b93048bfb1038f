#pragma once

#include "lgs/gradients.hpp"
#include "lgs/types.hpp"

#include <stdexcept>
#include <vector>

namespace lgs {

/// Parameters of the local gradients smoothing transform.
struct LgsParams {
  double lambda = 2.3;  ///< smoothing factor; 0 disables suppression
  Index block = 15;     ///< square block side tau
  Index overlap = 5;    ///< block overlap o, 0 <= o < block
  double gamma = 0.1;   ///< block-mean keep threshold in [0, 1]

  void validate() const {
    if (block < 1) throw std::invalid_argument("LgsParams: block must be >= 1");
    if (overlap < 0 || overlap >= block)
      throw std::invalid_argument("LgsParams: overlap must satisfy 0 <= overlap < block");
    if (lambda < 0) throw std::invalid_argument("LgsParams: lambda must be >= 0");
    if (gamma < 0 || gamma > 1) throw std::invalid_argument("LgsParams: gamma must be in [0,1]");
  }
};

/// Overlapping block decomposition of an image. Anchors step by
/// block - overlap; the last anchor per axis is clamped to dim - block so
/// every pixel is covered. Images smaller than the block in either axis
/// degenerate to a single block spanning the whole image.
struct BlockGrid {
  std::vector<Index> rowAnchors, colAnchors;
  Index blockRows = 0, blockCols = 0;

  Index blockCount() const {
    return static_cast<Index>(rowAnchors.size() * colAnchors.size());
  }
};

namespace detail {

inline std::vector<Index> anchorsAlong(Index dim, Index block, Index overlap) {
  std::vector<Index> out;
  const Index stride = block - overlap;
  Index a = 0;
  while (true) {
    if (a + block >= dim) {
      out.push_back(dim - block);
      break;
    }
    out.push_back(a);
    a += stride;
  }
  return out;
}

// Row-major scalar accumulation; the mean must not depend on traversal
// order or SIMD width because keep/zero decisions are compared bit-for-bit
// against a straight-line reference.
template <typename S>
S blockMean(const PlaneT<S>& g, Index top, Index left, Index h, Index w) {
  S sum = 0;
  for (Index i = top; i < top + h; ++i)
    for (Index j = left; j < left + w; ++j) sum += g(i, j);
  return sum / static_cast<S>(h * w);
}

template <typename S>
Mask keptBlockUnion(const PlaneT<S>& g, const BlockGrid& grid, double gamma) {
  Mask keep = Mask::Zero(g.rows(), g.cols());
  for (Index a : grid.rowAnchors)
    for (Index b : grid.colAnchors)
      if (blockMean(g, a, b, grid.blockRows, grid.blockCols) > static_cast<S>(gamma))
        keep.block(a, b, grid.blockRows, grid.blockCols).setConstant(1);
  return keep;
}

}  // namespace detail

inline BlockGrid makeGrid(Index rows, Index cols, const LgsParams& params) {
  params.validate();
  if (rows < 1 || cols < 1) throw std::invalid_argument("makeGrid: empty image");
  BlockGrid grid;
  if (rows < params.block || cols < params.block) {
    grid.rowAnchors = {0};
    grid.colAnchors = {0};
    grid.blockRows = rows;
    grid.blockCols = cols;
    return grid;
  }
  grid.rowAnchors = detail::anchorsAlong(rows, params.block, params.overlap);
  grid.colAnchors = detail::anchorsAlong(cols, params.block, params.overlap);
  grid.blockRows = params.block;
  grid.blockCols = params.block;
  return grid;
}

/// Keep blocks whose mean exceeds gamma, zero the rest, and collate.
/// A pixel in several blocks keeps its value if any covering block is kept
/// (elementwise max), so a patch straddling block boundaries stays covered
/// and surviving values are the original g values, never averages.
template <typename S>
PlaneT<S> filterBlocks(const PlaneT<S>& g, const BlockGrid& grid, double gamma) {
  const Mask keep = detail::keptBlockUnion(g, grid, gamma);
  return (keep != std::uint8_t(0)).select(g, S(0));
}

/// Everything one pass of the defense produces. The intermediate maps
/// mirror the usual visualization panels: normalized gradient magnitude,
/// the same map after windowing, and the kept-block union.
struct LgsArtifacts {
  GradMap normalizedGradients;
  GradMap windowedGradients;
  Mask mask;
  Image output;
};

inline LgsArtifacts lgsRun(const Image& img, const LgsParams& params) {
  params.validate();
  const Plane y = luminance(img);
  const GradMap g = normalizeMinMax(gradientMagnitude(y));
  const BlockGrid grid = makeGrid(y.rows(), y.cols(), params);
  const Mask keep = detail::keptBlockUnion(g, grid, params.gamma);
  const GradMap gbar = (keep != std::uint8_t(0)).select(g, 0.0);
  const Plane multiplier = 1.0 - (params.lambda * gbar).min(1.0).max(0.0);
  return LgsArtifacts{g, gbar, keep,
                      Image(img.r * multiplier, img.g * multiplier, img.b * multiplier)};
}

/// The full defense: suppress the image wherever the windowed, normalized
/// gradient map survives thresholding.
///
/// Pipeline: y = luminance, g = normalize(|grad y|), gbar = block filter,
/// output = img (x) (1 - clip(lambda * gbar, 0, 1)) on every channel.
/// Pixels covered only by zeroed blocks come back bit-identical.
inline Image lgsTransform(const Image& img, const LgsParams& params) {
  return lgsRun(img, params).output;
}

/// Union of kept blocks: the defense's estimate of where the noise sits.
inline Mask estimateMask(const Image& img, const LgsParams& params) {
  params.validate();
  const Plane y = luminance(img);
  const GradMap g = normalizeMinMax(gradientMagnitude(y));
  const BlockGrid grid = makeGrid(y.rows(), y.cols(), params);
  return detail::keptBlockUnion(g, grid, params.gamma);
}

}  // namespace lgs
