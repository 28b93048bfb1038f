#pragma once

#include "lgs/rng.hpp"
#include "lgs/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

// Localized-noise simulator: x' = (1 - m) (.) x + m (.) delta. Noise values
// depend only on (seed, absolute pixel position), so composition is
// idempotent and reproducible regardless of mask shape, evaluation order,
// or worker count.

namespace lgs {

struct UniformNoise {
  std::uint64_t seed = 0;
};
struct CheckerboardNoise {
  Index period = 1;  ///< cell side in pixels
};
struct SolidNoise {
  double value = 1.0;
};
using NoiseSpec = std::variant<UniformNoise, CheckerboardNoise, SolidNoise>;

/// One rectangular patch: geometry plus its noise source.
struct PatchSpec {
  Index top = 0;
  Index left = 0;
  Index size = 42;
  NoiseSpec noise = UniformNoise{};
};

/// Named geometries: lavan42/lavan52/lavan60 and patch95 (for 299x299 inputs).
inline Index presetPatchSize(const std::string& name) {
  if (name == "lavan42") return 42;
  if (name == "lavan52") return 52;
  if (name == "lavan60") return 60;
  if (name == "patch95") return 95;
  throw std::invalid_argument("unknown patch preset: " + name);
}

inline double noiseValue(const NoiseSpec& noise, Index row, Index col, int channel,
                         Index imageCols) {
  if (const auto* u = std::get_if<UniformNoise>(&noise)) {
    const std::uint64_t counter =
        (static_cast<std::uint64_t>(row) * static_cast<std::uint64_t>(imageCols) +
         static_cast<std::uint64_t>(col)) *
            3ull +
        static_cast<std::uint64_t>(channel);
    return rng::uniform01(u->seed, counter);
  }
  if (const auto* c = std::get_if<CheckerboardNoise>(&noise)) {
    if (c->period < 1) throw std::invalid_argument("checkerboard period must be >= 1");
    return ((row / c->period + col / c->period) % 2 == 0) ? 1.0 : 0.0;
  }
  const auto& s = std::get<SolidNoise>(noise);
  if (s.value < 0 || s.value > 1)
    throw std::invalid_argument("solid noise value must be in [0, 1]");
  return s.value;
}

/// 1 inside the patch rectangle, 0 outside.
inline Mask makeMask(const PatchSpec& spec, Index rows, Index cols) {
  if (spec.size < 0 || spec.top < 0 || spec.left < 0 || spec.top + spec.size > rows ||
      spec.left + spec.size > cols)
    throw std::invalid_argument("makeMask: patch rectangle out of bounds");
  Mask m = Mask::Zero(rows, cols);
  if (spec.size > 0) m.block(spec.top, spec.left, spec.size, spec.size).setConstant(1);
  return m;
}

/// Replace masked pixels with generated noise; everything else is returned
/// bit-identical.
inline Image applyPatch(const Image& img, const Mask& mask, const NoiseSpec& noise) {
  if (mask.rows() != img.rows() || mask.cols() != img.cols())
    throw std::invalid_argument("applyPatch: mask dimensions do not match image");
  Image out = img;
  for (Index i = 0; i < mask.rows(); ++i)
    for (Index j = 0; j < mask.cols(); ++j)
      if (mask(i, j)) {
        out.r(i, j) = noiseValue(noise, i, j, 0, img.cols());
        out.g(i, j) = noiseValue(noise, i, j, 1, img.cols());
        out.b(i, j) = noiseValue(noise, i, j, 2, img.cols());
      }
  return out;
}

/// Serialize a resolved patch to / from the shared config schema:
/// {"size": 42, "top": 0, "left": 0, "noise": {"kind": "uniform", ...}}.
/// Parsing also accepts {"preset": "lavan42"} in place of "size".
std::string patchToJson(const PatchSpec& spec);
PatchSpec patchFromJson(const std::string& json);

/// Uniformly random anchor keeping the patch inside the border band of the
/// given margin, i.e. the patch never touches the central
/// (rows - 2*margin) x (cols - 2*margin) region. Deterministic per seed.
inline std::pair<Index, Index> sampleBorderLocation(Index size, Index rows, Index cols,
                                                    Index margin, std::uint64_t seed) {
  if (size < 1 || size > rows || size > cols)
    throw std::invalid_argument("sampleBorderLocation: patch does not fit in image");
  const bool centralEmpty = rows <= 2 * margin || cols <= 2 * margin;
  if (!centralEmpty && margin < size)
    throw std::invalid_argument(
        "sampleBorderLocation: infeasible geometry (margin smaller than patch)");
  const auto nTop = static_cast<std::uint64_t>(rows - size + 1);
  const auto nLeft = static_cast<std::uint64_t>(cols - size + 1);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const auto top = static_cast<Index>(rng::below(seed, 2 * attempt, nTop));
    const auto left = static_cast<Index>(rng::below(seed, 2 * attempt + 1, nLeft));
    const bool clear = centralEmpty || top + size <= margin || top >= rows - margin ||
                       left + size <= margin || left >= cols - margin;
    if (clear) return {top, left};
  }
}

}  // namespace lgs
