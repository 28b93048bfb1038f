#pragma once

#include "lgs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lgs {

/// Load an 8-bit PNG (RGB or grayscale, non-interlaced) or binary PPM/PGM
/// with maxval 255. Bytes map to [0,1] as v/255; grayscale replicates to
/// all three planes. Throws std::runtime_error on unreadable files and
/// std::invalid_argument on unsupported formats.
Image loadImage(const std::string& path);

/// Save as 8-bit PNG (.png), binary PPM (.ppm/.pnm) or, when all three
/// channels are identical, binary PGM (.pgm). Values quantize by
/// round-half-up to 256 levels, so save-then-load moves a value by at most
/// 1/510. PNG output uses stored (uncompressed) deflate blocks: the bytes
/// are deterministic and independent of any compressor version.
void saveImage(const Image& img, const std::string& path);

/// Export a single plane as PGM, e.g. gradient maps and masks. Values are
/// clamped to [0,1] before quantization.
void savePlanePgm(const Plane& plane, const std::string& path);

/// In-memory encoders, exposed for golden-byte tests.
std::vector<std::uint8_t> encodePpm(const Image& img);
std::vector<std::uint8_t> encodePgm(const Plane& plane);
std::vector<std::uint8_t> encodePng(const Image& img);
Image decodeImage(const std::vector<std::uint8_t>& bytes);

}  // namespace lgs
