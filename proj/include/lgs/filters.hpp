#pragma once

#include "lgs/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

// Smoothing-filter and quantization baselines. All filters pad with edge
// replication so every defense treats image borders the same way; patches
// sit on borders in the evaluation geometry.

namespace lgs {

namespace detail {

inline Index clampIndex(Index i, Index n) { return std::min(std::max(i, Index(0)), n - 1); }

inline void requireOddWindow(Index window, const char* who) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument(std::string(who) + ": window must be odd and >= 1");
}

}  // namespace detail

/// Truncated, renormalized Gaussian kernel of odd length. Sums to 1.
inline std::vector<double> gaussianKernel(Index window, double sigma) {
  detail::requireOddWindow(window, "gaussianKernel");
  if (!(sigma > 0)) throw std::invalid_argument("gaussianKernel: sigma must be > 0");
  std::vector<double> k(static_cast<std::size_t>(window));
  const Index c = window / 2;
  double sum = 0;
  for (Index i = 0; i < window; ++i) {
    const double d = static_cast<double>(i - c);
    k[i] = std::exp(-(d * d) / (2 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

template <typename S>
PlaneT<S> medianFilterPlane(const PlaneT<S>& p, Index window) {
  detail::requireOddWindow(window, "medianFilter");
  if (window == 1) return p;
  const Index h = p.rows(), w = p.cols(), r = window / 2;
  PlaneT<S> out(h, w);
  std::vector<S> buf(static_cast<std::size_t>(window * window));
  for (Index i = 0; i < h; ++i) {
    for (Index j = 0; j < w; ++j) {
      std::size_t n = 0;
      for (Index di = -r; di <= r; ++di)
        for (Index dj = -r; dj <= r; ++dj)
          buf[n++] = p(detail::clampIndex(i + di, h), detail::clampIndex(j + dj, w));
      auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
      std::nth_element(buf.begin(), mid, buf.end());
      out(i, j) = *mid;
    }
  }
  return out;
}

template <typename S>
PlaneT<S> gaussianFilterPlane(const PlaneT<S>& p, Index window, double sigma) {
  const std::vector<double> k = gaussianKernel(window, sigma);
  const Index h = p.rows(), w = p.cols(), r = window / 2;
  PlaneT<S> tmp(h, w), out(h, w);
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      S acc = 0;
      for (Index d = -r; d <= r; ++d)
        acc += static_cast<S>(k[static_cast<std::size_t>(d + r)]) *
               p(i, detail::clampIndex(j + d, w));
      tmp(i, j) = acc;
    }
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      S acc = 0;
      for (Index d = -r; d <= r; ++d)
        acc += static_cast<S>(k[static_cast<std::size_t>(d + r)]) *
               tmp(detail::clampIndex(i + d, h), j);
      out(i, j) = acc;
    }
  return out;
}

template <typename S>
PlaneT<S> bilateralFilterPlane(const PlaneT<S>& p, Index window, double sigmaSpace,
                               double sigmaRange) {
  detail::requireOddWindow(window, "bilateralFilter");
  if (!(sigmaSpace > 0) || !(sigmaRange > 0))
    throw std::invalid_argument("bilateralFilter: sigmas must be > 0");
  const Index h = p.rows(), w = p.cols(), r = window / 2;
  const std::vector<double> k1 = gaussianKernel(window, sigmaSpace);
  const double invRange = 1.0 / (2 * sigmaRange * sigmaRange);
  PlaneT<S> out(h, w);
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      const S center = p(i, j);
      double num = 0, den = 0;
      for (Index di = -r; di <= r; ++di)
        for (Index dj = -r; dj <= r; ++dj) {
          const S v = p(detail::clampIndex(i + di, h), detail::clampIndex(j + dj, w));
          const double diff = static_cast<double>(v - center);
          const double wgt = k1[static_cast<std::size_t>(di + r)] *
                             k1[static_cast<std::size_t>(dj + r)] *
                             std::exp(-diff * diff * invRange);
          num += wgt * static_cast<double>(v);
          den += wgt;
        }
      out(i, j) = static_cast<S>(num / den);
    }
  return out;
}

/// Uniform quantization to 2^depth levels: round(v * (2^d - 1)) / (2^d - 1).
template <typename S>
PlaneT<S> bitDepthReducePlane(const PlaneT<S>& p, int depth) {
  if (depth < 1 || depth > 8)
    throw std::invalid_argument("bitDepthReduce: depth must be in [1, 8]");
  const S levels = static_cast<S>((1 << depth) - 1);
  return (p * levels).round() / levels;
}

inline Image medianFilter(const Image& img, Index window) {
  return Image(medianFilterPlane(img.r, window), medianFilterPlane(img.g, window),
               medianFilterPlane(img.b, window));
}

inline Image gaussianFilter(const Image& img, Index window, double sigma) {
  return Image(gaussianFilterPlane(img.r, window, sigma),
               gaussianFilterPlane(img.g, window, sigma),
               gaussianFilterPlane(img.b, window, sigma));
}

inline Image bilateralFilter(const Image& img, Index window, double sigmaSpace,
                             double sigmaRange) {
  return Image(bilateralFilterPlane(img.r, window, sigmaSpace, sigmaRange),
               bilateralFilterPlane(img.g, window, sigmaSpace, sigmaRange),
               bilateralFilterPlane(img.b, window, sigmaSpace, sigmaRange));
}

inline Image bitDepthReduce(const Image& img, int depth) {
  return Image(bitDepthReducePlane(img.r, depth), bitDepthReducePlane(img.g, depth),
               bitDepthReducePlane(img.b, depth));
}

}  // namespace lgs
