#pragma once

#include "lgs/smoothing.hpp"
#include "lgs/types.hpp"

#include <optional>
#include <string>
#include <variant>

namespace lgs {

struct MedianParams {
  Index window = 3;
};
struct GaussianParams {
  Index window = 5;
  double sigma = 0;  ///< <= 0 means the documented default window / 6
};
struct BilateralParams {
  Index window = 5;
  double sigmaSpace = 0;  ///< <= 0 means window / 6
  double sigmaRange = 0.1;
};
struct BitDepthParams {
  int depth = 3;
};
struct JpegParams {
  int quality = 30;
};
struct TvmParams {
  double weight = 10;
  int maxIters = 200;
  double tol = 2e-4;
};

/// One configured defense. Short labels are the usual abbreviations
/// (LGS, MF, GF, BF, JPEG, TVM, BR).
struct DefenseConfig {
  std::variant<LgsParams, MedianParams, GaussianParams, BilateralParams, BitDepthParams,
               JpegParams, TvmParams>
      params = LgsParams{};

  std::string kind() const;        ///< lowercase config key, e.g. "lgs"
  std::string shortLabel() const;  ///< table label, e.g. "LGS"
  std::string paramsLabel() const; ///< e.g. "lambda=2.3 block=15 overlap=5 gamma=0.1"
  void validate() const;
};

/// Extra facts produced while running a defense (TVM convergence).
struct DefenseRunInfo {
  std::optional<bool> tvmConverged;
  std::optional<int> tvmIterations;
};

Image applyDefense(const Image& img, const DefenseConfig& cfg,
                   DefenseRunInfo* info = nullptr);

/// Serialize to / parse from the shared config schema:
/// {"kind": "...", "params": {...}}.
std::string defenseToJson(const DefenseConfig& cfg);
DefenseConfig defenseFromJson(const std::string& json);

/// The full comparison grid: LGS lambda sweep 1.5..2.3, MF 3, GF 5,
/// BF 5, JPEG {10,20,30,40,60,80}, TVM {10,20,30}, BR {1,2,3}.
std::vector<DefenseConfig> fullDefenseGrid();

/// Just the LGS lambda sweep rows.
std::vector<DefenseConfig> lgsLambdaSweep();

}  // namespace lgs
