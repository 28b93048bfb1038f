#include "lgs/metrics.hpp"

#include "lgs/gradients.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lgs {

namespace {

using nlohmann::json;

std::string patchLabel(const PatchSpec& spec) {
  std::ostringstream os;
  os << "size=" << spec.size << " top=" << spec.top << " left=" << spec.left << " noise=";
  if (const auto* u = std::get_if<UniformNoise>(&spec.noise))
    os << "uniform(seed=" << u->seed << ")";
  else if (const auto* c = std::get_if<CheckerboardNoise>(&spec.noise))
    os << "checkerboard(period=" << c->period << ")";
  else
    os << "solid(value=" << std::get<SolidNoise>(spec.noise).value << ")";
  return os.str();
}

std::string csvNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double meanAbsDiffOutside(const Image& a, const Image& b, const Mask& mask) {
  double sum = 0;
  long count = 0;
  for (Index i = 0; i < mask.rows(); ++i)
    for (Index j = 0; j < mask.cols(); ++j)
      if (!mask(i, j)) {
        sum += std::abs(a.r(i, j) - b.r(i, j)) + std::abs(a.g(i, j) - b.g(i, j)) +
               std::abs(a.b(i, j) - b.b(i, j));
        count += 3;
      }
  return count ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

Mask erodeOnePixel(const Mask& mask) {
  const Index h = mask.rows(), w = mask.cols();
  Mask out = Mask::Zero(h, w);
  for (Index i = 1; i + 1 < h; ++i)
    for (Index j = 1; j + 1 < w; ++j) {
      bool all = true;
      for (Index di = -1; di <= 1 && all; ++di)
        for (Index dj = -1; dj <= 1; ++dj)
          if (!mask(i + di, j + dj)) {
            all = false;
            break;
          }
      out(i, j) = all ? 1 : 0;
    }
  return out;
}

double maskedGradEnergy(const Image& img, const Mask& mask) {
  if (mask.rows() != img.rows() || mask.cols() != img.cols())
    throw std::invalid_argument("maskedGradEnergy: mask dimensions do not match image");
  const Mask interior = erodeOnePixel(mask);
  const long count = interior.cast<long>().sum();
  if (count == 0)
    throw std::invalid_argument("maskedGradEnergy: mask interior empty after erosion");
  const GradMap g = gradientMagnitude(luminance(img));
  double sum = 0;
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j)
      if (interior(i, j)) sum += g(i, j);
  return sum / static_cast<double>(count);
}

double psnr(const Image& a, const Image& b, const std::optional<Mask>& region) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("psnr: image dimensions differ");
  double sum = 0;
  long count = 0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (region && !(*region)(i, j)) continue;
      const double dr = a.r(i, j) - b.r(i, j);
      const double dg = a.g(i, j) - b.g(i, j);
      const double db = a.b(i, j) - b.b(i, j);
      sum += dr * dr + dg * dg + db * db;
      count += 3;
    }
  if (count == 0) throw std::invalid_argument("psnr: empty region");
  const double mse = sum / static_cast<double>(count);
  if (mse == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

std::pair<double, double> localizationScores(const Mask& estimated, const Mask& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols())
    throw std::invalid_argument("localizationScores: dimensions differ");
  long inter = 0, est = 0, tr = 0;
  for (Index i = 0; i < truth.rows(); ++i)
    for (Index j = 0; j < truth.cols(); ++j) {
      const bool e = estimated(i, j) != 0, t = truth(i, j) != 0;
      inter += (e && t) ? 1 : 0;
      est += e ? 1 : 0;
      tr += t ? 1 : 0;
    }
  const double coverage = tr ? static_cast<double>(inter) / static_cast<double>(tr) : 0.0;
  const double excess =
      est ? static_cast<double>(est - inter) / static_cast<double>(est) : 0.0;
  return {coverage, excess};
}

EvalReport evaluate(const Image& img, const PatchSpec& spec, const DefenseConfig& defense) {
  defense.validate();
  EvalReport rep;
  rep.defense = defense;
  rep.patch = spec;

  const Mask truth = makeMask(spec, img.rows(), img.cols());
  const Image patched = applyPatch(img, truth, spec.noise);

  const auto start = std::chrono::steady_clock::now();
  const Image defended = applyDefense(patched, defense, &rep.runInfo);
  const auto stop = std::chrono::steady_clock::now();
  rep.runtimeMs = std::chrono::duration<double, std::milli>(stop - start).count();

  rep.gradEnergyBefore = maskedGradEnergy(patched, truth);
  rep.gradEnergyAfter = maskedGradEnergy(defended, truth);
  rep.suppressionRatio = (rep.gradEnergyBefore == 0 && rep.gradEnergyAfter == 0)
                             ? 1.0
                             : rep.gradEnergyAfter / rep.gradEnergyBefore;

  const Mask outside = (truth == std::uint8_t(0)).cast<std::uint8_t>();
  rep.psnrOutsideMask = psnr(patched, defended, outside);
  rep.meanAbsChangeOutside = meanAbsDiffOutside(patched, defended, truth);

  if (const auto* p = std::get_if<LgsParams>(&defense.params)) {
    const Mask estimated = estimateMask(patched, *p);
    std::tie(rep.localizationCoverage, rep.localizationExcess) =
        localizationScores(estimated, truth);
  }
  return rep;
}

std::string EvalReport::toJson() const {
  json j;
  j["defense"] = json::parse(defenseToJson(defense));
  j["patch"] = json::parse(patchToJson(patch));
  j["grad_energy_before"] = gradEnergyBefore;
  j["grad_energy_after"] = gradEnergyAfter;
  j["suppression_ratio"] = suppressionRatio;
  if (std::isinf(psnrOutsideMask))
    j["psnr_outside_mask"] = nullptr;  // JSON has no infinity
  else
    j["psnr_outside_mask"] = psnrOutsideMask;
  j["mean_abs_change_outside"] = meanAbsChangeOutside;
  j["localization_coverage"] = localizationCoverage;
  j["localization_excess"] = localizationExcess;
  j["runtime_ms"] = runtimeMs;
  if (runInfo.tvmConverged) j["tvm_converged"] = *runInfo.tvmConverged;
  if (runInfo.tvmIterations) j["tvm_iterations"] = *runInfo.tvmIterations;
  return j.dump();
}

std::string EvalReport::csvHeader() {
  return "defense,params,patch,grad_energy_before,grad_energy_after,suppression_ratio,"
         "psnr_outside_mask,mean_abs_change_outside,localization_coverage,"
         "localization_excess,runtime_ms";
}

std::string EvalReport::csvRow() const {
  std::ostringstream os;
  os << defense.shortLabel() << "," << defense.paramsLabel() << "," << patchLabel(patch)
     << "," << csvNumber(gradEnergyBefore) << "," << csvNumber(gradEnergyAfter) << ","
     << csvNumber(suppressionRatio) << "," << csvNumber(psnrOutsideMask) << ","
     << csvNumber(meanAbsChangeOutside) << "," << csvNumber(localizationCoverage) << ","
     << csvNumber(localizationExcess) << "," << csvNumber(runtimeMs);
  return os.str();
}

std::string csvSummaryRow(const std::vector<EvalReport>& reports) {
  if (reports.empty()) return "summary:mean,,,,,,,,,,";
  double f[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  long finitePsnr = 0;
  for (const EvalReport& r : reports) {
    f[0] += r.gradEnergyBefore;
    f[1] += r.gradEnergyAfter;
    f[2] += r.suppressionRatio;
    if (std::isfinite(r.psnrOutsideMask)) {
      f[3] += r.psnrOutsideMask;
      ++finitePsnr;
    }
    f[4] += r.meanAbsChangeOutside;
    f[5] += r.localizationCoverage;
    f[6] += r.localizationExcess;
    f[7] += r.runtimeMs;
  }
  const double n = static_cast<double>(reports.size());
  std::ostringstream os;
  os << "summary:mean,,," << csvNumber(f[0] / n) << "," << csvNumber(f[1] / n) << ","
     << csvNumber(f[2] / n) << ","
     << (finitePsnr ? csvNumber(f[3] / static_cast<double>(finitePsnr)) : "inf") << ","
     << csvNumber(f[4] / n) << "," << csvNumber(f[5] / n) << "," << csvNumber(f[6] / n)
     << "," << csvNumber(f[7] / n);
  return os.str();
}

}  // namespace lgs
