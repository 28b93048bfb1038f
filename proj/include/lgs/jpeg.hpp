#pragma once

#include "lgs/types.hpp"

#include <array>

namespace lgs {

/// Quality-scaled quantization table (Annex-K base tables, scale
/// 5000/q below 50 and 200 - 2q above, floored at 1). Exposed for tests.
std::array<std::array<double, 8>, 8> jpegQuantTable(int quality, bool chroma);

/// In-memory JPEG round trip: RGB -> YCbCr, 4:2:0 chroma subsampling,
/// 8x8 DCT, quantization, and the inverse chain. Entropy coding is
/// lossless and therefore skipped; the defense effect is entirely the
/// subsampling plus quantization.
Image jpegTransform(const Image& img, int quality);

}  // namespace lgs
