#include "lgs/jpeg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace lgs {

namespace {

// ITU-T T.81 Annex K.1 / K.2 example tables.
constexpr int kLumaBase[8][8] = {
    {16, 11, 10, 16, 24, 40, 51, 61},     {12, 12, 14, 19, 26, 58, 60, 55},
    {14, 13, 16, 24, 40, 57, 69, 56},     {14, 17, 22, 29, 51, 87, 80, 62},
    {18, 22, 37, 56, 68, 109, 103, 77},   {24, 35, 55, 64, 81, 104, 113, 92},
    {49, 64, 78, 87, 103, 121, 120, 101}, {72, 92, 95, 98, 112, 100, 103, 99}};

constexpr int kChromaBase[8][8] = {
    {17, 18, 24, 47, 99, 99, 99, 99}, {18, 21, 26, 66, 99, 99, 99, 99},
    {24, 26, 56, 99, 99, 99, 99, 99}, {47, 66, 99, 99, 99, 99, 99, 99},
    {99, 99, 99, 99, 99, 99, 99, 99}, {99, 99, 99, 99, 99, 99, 99, 99},
    {99, 99, 99, 99, 99, 99, 99, 99}, {99, 99, 99, 99, 99, 99, 99, 99}};

using Mat8 = Eigen::Matrix<double, 8, 8>;

Mat8 dctMatrix() {
  Mat8 c;
  const double pi = std::acos(-1.0);
  for (int u = 0; u < 8; ++u)
    for (int j = 0; j < 8; ++j)
      c(u, j) = (u == 0) ? 1.0 / std::sqrt(8.0)
                         : 0.5 * std::cos((2 * j + 1) * u * pi / 16.0);
  return c;
}

// Pad to a multiple of 8 with edge replication.
Plane padTo8(const Plane& p) {
  const Index h = p.rows(), w = p.cols();
  const Index ph = (h + 7) / 8 * 8, pw = (w + 7) / 8 * 8;
  if (ph == h && pw == w) return p;
  Plane out(ph, pw);
  for (Index i = 0; i < ph; ++i)
    for (Index j = 0; j < pw; ++j)
      out(i, j) = p(std::min(i, h - 1), std::min(j, w - 1));
  return out;
}

// DCT, quantize, dequantize, inverse DCT, blockwise. Input is level-shifted.
Plane dctQuantizeRoundTrip(const Plane& shifted, const std::array<std::array<double, 8>, 8>& q) {
  static const Mat8 C = dctMatrix();
  const Plane padded = padTo8(shifted);
  Plane out(padded.rows(), padded.cols());
  for (Index bi = 0; bi < padded.rows(); bi += 8)
    for (Index bj = 0; bj < padded.cols(); bj += 8) {
      Mat8 block = padded.block(bi, bj, 8, 8).matrix();
      Mat8 coeff = C * block * C.transpose();
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
          coeff(u, v) = std::round(coeff(u, v) / q[u][v]) * q[u][v];
      out.block(bi, bj, 8, 8) = (C.transpose() * coeff * C).array();
    }
  return out.block(0, 0, shifted.rows(), shifted.cols());
}

// 2x2 box average; odd trailing rows/cols replicate the edge.
Plane downsample2(const Plane& p) {
  const Index h = p.rows(), w = p.cols();
  const Index oh = (h + 1) / 2, ow = (w + 1) / 2;
  Plane out(oh, ow);
  for (Index i = 0; i < oh; ++i)
    for (Index j = 0; j < ow; ++j) {
      const Index i0 = 2 * i, j0 = 2 * j;
      const Index i1 = std::min(i0 + 1, h - 1), j1 = std::min(j0 + 1, w - 1);
      out(i, j) = 0.25 * (p(i0, j0) + p(i0, j1) + p(i1, j0) + p(i1, j1));
    }
  return out;
}

Plane upsample2(const Plane& p, Index h, Index w) {
  Plane out(h, w);
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) out(i, j) = p(i / 2, j / 2);
  return out;
}

}  // namespace

std::array<std::array<double, 8>, 8> jpegQuantTable(int quality, bool chroma) {
  if (quality < 1 || quality > 100)
    throw std::invalid_argument("jpegTransform: quality must be in [1, 100]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<std::array<double, 8>, 8> q{};
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      const int base = chroma ? kChromaBase[u][v] : kLumaBase[u][v];
      q[u][v] = std::max(1.0, std::floor((base * scale + 50) / 100.0));
    }
  return q;
}

Image jpegTransform(const Image& img, int quality) {
  const auto qLuma = jpegQuantTable(quality, false);
  const auto qChroma = jpegQuantTable(quality, true);
  const Index h = img.rows(), w = img.cols();

  // JFIF full-range YCbCr on the 0..255 scale.
  const Plane r = img.r * 255.0, g = img.g * 255.0, b = img.b * 255.0;
  const Plane y = 0.299 * r + 0.587 * g + 0.114 * b;
  const Plane cb = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b;
  const Plane cr = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b;

  const Plane yOut = dctQuantizeRoundTrip(y - 128.0, qLuma) + 128.0;
  const Plane cbOut =
      upsample2(dctQuantizeRoundTrip(downsample2(cb) - 128.0, qChroma) + 128.0, h, w);
  const Plane crOut =
      upsample2(dctQuantizeRoundTrip(downsample2(cr) - 128.0, qChroma) + 128.0, h, w);

  const Plane rOut = yOut + 1.402 * (crOut - 128.0);
  const Plane gOut = yOut - 0.344136286 * (cbOut - 128.0) - 0.714136286 * (crOut - 128.0);
  const Plane bOut = yOut + 1.772 * (cbOut - 128.0);
  return Image((rOut / 255.0).min(1.0).max(0.0), (gOut / 255.0).min(1.0).max(0.0),
               (bOut / 255.0).min(1.0).max(0.0));
}

}  // namespace lgs
