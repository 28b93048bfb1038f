#pragma once

#include "lgs/defense.hpp"
#include "lgs/patch.hpp"
#include "lgs/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lgs {

/// 3x3 binary erosion; pixels outside the image count as background.
Mask erodeOnePixel(const Mask& mask);

/// Mean first-order gradient magnitude of the luminance over the mask
/// interior (mask eroded by one pixel: the patch outline is a real edge
/// even after perfect suppression). Magnitudes are not re-normalized, so
/// before/after values stay on a common scale.
double maskedGradEnergy(const Image& img, const Mask& mask);

/// 10 log10(1 / MSE) with peak 1.0, over all channels of the region
/// (whole image when region is empty optional). Identical inputs give
/// +infinity.
double psnr(const Image& a, const Image& b, const std::optional<Mask>& region = {});

/// coverage = |est & truth| / |truth|; excess = |est \ truth| / |est|,
/// 0 when est is empty.
std::pair<double, double> localizationScores(const Mask& estimated, const Mask& truth);

/// One evaluation record: patch scenario, defense, and the measured
/// suppression / structural-loss / localization numbers.
struct EvalReport {
  DefenseConfig defense;
  PatchSpec patch;
  double gradEnergyBefore = 0;
  double gradEnergyAfter = 0;
  double suppressionRatio = 1;  ///< after / before, 0/0 defined as 1
  double psnrOutsideMask = 0;   ///< dB, +inf when unchanged
  double meanAbsChangeOutside = 0;
  double localizationCoverage = 0;  ///< 0 for defenses that do not localize
  double localizationExcess = 0;
  double runtimeMs = 0;
  DefenseRunInfo runInfo;

  std::string toJson() const;  ///< one object (no trailing newline)
  std::string csvRow() const;
  static std::string csvHeader();
};

/// Patch the image per spec, run the defense, and fill every report field.
EvalReport evaluate(const Image& img, const PatchSpec& spec, const DefenseConfig& defense);

/// Column means over the metric fields, emitted as a `summary:mean` row.
std::string csvSummaryRow(const std::vector<EvalReport>& reports);

}  // namespace lgs
