// Command-line front end: defend / simulate / evaluate / batch / inspect.
//
// Every command is deterministic under a fixed --seed and configuration,
// whatever --workers says: tasks are indexed up front and results land in
// per-index slots before emission.

#include "lgs/lgs.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <glob.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PatchRequest {
  lgs::PatchSpec spec;
  bool border = false;  // sample a border-band location per input
  lgs::Index margin = 75;
};

struct RunConfig {
  std::vector<std::string> inputs;  // paths or globs
  std::string output;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> emit;  // png pnm json csv
  std::vector<lgs::DefenseConfig> defenses;
  std::optional<PatchRequest> patch;
  bool dumpIntermediates = false;
};

unsigned defaultWorkers() {
  if (const char* env = std::getenv("LGS_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<std::string> expandInputs(const std::vector<std::string>& patterns) {
  if (patterns.empty()) throw std::runtime_error("no inputs given");
  std::vector<std::string> files;
  for (const std::string& pattern : patterns) {
    glob_t result{};
    const int rc = glob(pattern.c_str(), 0, nullptr, &result);
    if (rc == GLOB_NOMATCH) {
      globfree(&result);
      throw std::runtime_error("no inputs match: " + pattern);
    }
    if (rc != 0) {
      globfree(&result);
      throw std::runtime_error("cannot expand input pattern: " + pattern);
    }
    for (std::size_t i = 0; i < result.gl_pathc; ++i)
      files.emplace_back(result.gl_pathv[i]);
    globfree(&result);
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

bool wants(const RunConfig& cfg, const std::string& what, bool fallback) {
  if (cfg.emit.empty()) return fallback;
  return std::find(cfg.emit.begin(), cfg.emit.end(), what) != cfg.emit.end();
}

std::string imageExtension(const RunConfig& cfg) {
  if (wants(cfg, "pnm", false) && !wants(cfg, "png", false)) return ".ppm";
  return ".png";
}

// Border placement derives its location from (seed, input index): runs are
// reproducible and independent of worker scheduling.
lgs::PatchSpec resolvePatch(const PatchRequest& req, std::uint64_t seed,
                            std::size_t inputIndex, lgs::Index rows, lgs::Index cols) {
  lgs::PatchSpec spec = req.spec;
  if (req.border) {
    const std::uint64_t placementSeed = lgs::rng::mix64(seed, 1000003 + inputIndex);
    const auto [top, left] =
        lgs::sampleBorderLocation(spec.size, rows, cols, req.margin, placementSeed);
    spec.top = top;
    spec.left = left;
  }
  return spec;
}

json effectiveConfigJson(const RunConfig& cfg, const std::string& command) {
  json j;
  j["command"] = command;
  j["inputs"] = cfg.inputs;
  j["output"] = cfg.output;
  j["workers"] = cfg.workers;
  j["seed"] = cfg.seed;
  j["emit"] = cfg.emit;
  json defenses = json::array();
  for (const auto& d : cfg.defenses) defenses.push_back(json::parse(defenseToJson(d)));
  j["defenses"] = defenses;
  if (cfg.patch) {
    json p = json::parse(patchToJson(cfg.patch->spec));
    p["placement"] = cfg.patch->border ? "border" : "explicit";
    if (cfg.patch->border) p["margin"] = cfg.patch->margin;
    j["patch"] = p;
  }
  return j;
}

void writeEffectiveConfig(const RunConfig& cfg, const std::string& command) {
  std::ofstream out(fs::path(cfg.output) / "run.json");
  out << effectiveConfigJson(cfg, command).dump(2) << "\n";
}

struct TaskOutcome {
  bool ok = true;
  std::string error;
};

int reportFailures(const std::vector<TaskOutcome>& outcomes,
                   const std::vector<std::string>& labels) {
  int failures = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (!outcomes[i].ok) {
      ++failures;
      std::cerr << "error: " << labels[i] << ": " << outcomes[i].error << "\n";
    }
  return failures;
}

// ------------------------------------------------------------- commands ---

int cmdDefend(const RunConfig& cfg) {
  const std::vector<std::string> files = expandInputs(cfg.inputs);
  fs::create_directories(cfg.output);
  writeEffectiveConfig(cfg, "defend");
  const lgs::DefenseConfig& defense = cfg.defenses.at(0);
  const std::string ext = imageExtension(cfg);

  std::vector<TaskOutcome> outcomes(files.size());
  lgs::parallelFor(files.size(), cfg.workers, [&](std::size_t i) {
    try {
      const lgs::Image img = lgs::loadImage(files[i]);
      const std::string outBase = (fs::path(cfg.output) / fs::path(files[i]).stem()).string();
      if (cfg.dumpIntermediates) {
        if (const auto* p = std::get_if<lgs::LgsParams>(&defense.params)) {
          const lgs::LgsArtifacts art = lgs::lgsRun(img, *p);
          lgs::savePlanePgm(art.normalizedGradients, outBase + "_grad.pgm");
          lgs::savePlanePgm(art.windowedGradients, outBase + "_windowed.pgm");
          lgs::savePlanePgm(art.mask.cast<double>(), outBase + "_mask.pgm");
          lgs::saveImage(art.output, outBase + ext);
          return;
        }
      }
      lgs::saveImage(lgs::applyDefense(img, defense), outBase + ext);
    } catch (const std::exception& e) {
      outcomes[i] = {false, e.what()};
    }
  });
  return reportFailures(outcomes, files) ? 1 : 0;
}

int cmdSimulate(const RunConfig& cfg) {
  const std::vector<std::string> files = expandInputs(cfg.inputs);
  if (!cfg.patch) throw std::runtime_error("simulate requires a patch specification");
  fs::create_directories(cfg.output);
  writeEffectiveConfig(cfg, "simulate");
  const std::string ext = imageExtension(cfg);

  std::vector<TaskOutcome> outcomes(files.size());
  lgs::parallelFor(files.size(), cfg.workers, [&](std::size_t i) {
    try {
      const lgs::Image img = lgs::loadImage(files[i]);
      const lgs::PatchSpec spec =
          resolvePatch(*cfg.patch, cfg.seed, i, img.rows(), img.cols());
      const lgs::Mask mask = lgs::makeMask(spec, img.rows(), img.cols());
      const lgs::Image patched = lgs::applyPatch(img, mask, spec.noise);
      const std::string outBase = (fs::path(cfg.output) / fs::path(files[i]).stem()).string();
      lgs::saveImage(patched, outBase + "_patched" + ext);
      lgs::savePlanePgm(mask.cast<double>(), outBase + "_mask.pgm");
      std::ofstream meta(outBase + "_patch.json");
      meta << lgs::patchToJson(spec) << "\n";
    } catch (const std::exception& e) {
      outcomes[i] = {false, e.what()};
    }
  });
  return reportFailures(outcomes, files) ? 1 : 0;
}

int cmdEvaluate(const RunConfig& cfg) {
  const std::vector<std::string> files = expandInputs(cfg.inputs);
  if (!cfg.patch) throw std::runtime_error("evaluate requires a patch specification");
  if (cfg.defenses.empty()) throw std::runtime_error("evaluate requires a defense");
  fs::create_directories(cfg.output);
  writeEffectiveConfig(cfg, "evaluate");

  const std::size_t tasks = files.size() * cfg.defenses.size();
  std::vector<TaskOutcome> outcomes(tasks);
  std::vector<std::string> labels(tasks);
  std::vector<std::optional<lgs::EvalReport>> reports(tasks);

  lgs::parallelFor(tasks, cfg.workers, [&](std::size_t t) {
    const std::size_t fileIdx = t / cfg.defenses.size();
    const std::size_t defIdx = t % cfg.defenses.size();
    labels[t] = files[fileIdx] + " / " + cfg.defenses[defIdx].shortLabel() + " [" +
                cfg.defenses[defIdx].paramsLabel() + "]";
    try {
      const lgs::Image img = lgs::loadImage(files[fileIdx]);
      const lgs::PatchSpec spec =
          resolvePatch(*cfg.patch, cfg.seed, fileIdx, img.rows(), img.cols());
      reports[t] = lgs::evaluate(img, spec, cfg.defenses[defIdx]);
    } catch (const std::exception& e) {
      outcomes[t] = {false, e.what()};
    }
  });

  std::vector<lgs::EvalReport> ordered;
  for (const auto& r : reports)
    if (r) ordered.push_back(*r);

  if (wants(cfg, "csv", true)) {
    std::ofstream csv(fs::path(cfg.output) / "reports.csv");
    csv << lgs::EvalReport::csvHeader() << "\n";
    for (const auto& r : ordered) csv << r.csvRow() << "\n";
    csv << lgs::csvSummaryRow(ordered) << "\n";
  }
  if (wants(cfg, "json", true)) {
    std::ofstream jsonl(fs::path(cfg.output) / "reports.jsonl");
    for (const auto& r : ordered) jsonl << r.toJson() << "\n";
  }
  return reportFailures(outcomes, labels) ? 1 : 0;
}

int cmdInspect(const RunConfig& cfg) {
  const std::vector<std::string> files = expandInputs(cfg.inputs);
  const lgs::LgsParams params = cfg.defenses.empty()
                                    ? lgs::LgsParams{}
                                    : std::get<lgs::LgsParams>(cfg.defenses.at(0).params);
  for (const std::string& file : files) {
    const lgs::Image img = lgs::loadImage(file);
    const lgs::LgsArtifacts art = lgs::lgsRun(img, params);
    const double selected = static_cast<double>(art.mask.cast<long>().sum()) /
                            static_cast<double>(img.size());
    std::cout << file << ": " << img.rows() << "x" << img.cols() << " range=["
              << std::min({img.r.minCoeff(), img.g.minCoeff(), img.b.minCoeff()}) << ", "
              << std::max({img.r.maxCoeff(), img.g.maxCoeff(), img.b.maxCoeff()})
              << "] luminance_mean=" << lgs::luminance(img).mean()
              << " selected_fraction=" << selected << "\n";
    if (!cfg.output.empty()) {
      fs::create_directories(cfg.output);
      const std::string outBase = (fs::path(cfg.output) / fs::path(file).stem()).string();
      lgs::savePlanePgm(art.normalizedGradients, outBase + "_grad.pgm");
      lgs::savePlanePgm(art.windowedGradients, outBase + "_windowed.pgm");
      lgs::savePlanePgm(art.mask.cast<double>(), outBase + "_mask.pgm");
    }
  }
  return 0;
}

// ------------------------------------------------------ config plumbing ---

void mergeConfigFile(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  if (j.contains("inputs")) cfg.inputs = j["inputs"].get<std::vector<std::string>>();
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<unsigned>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("emit")) cfg.emit = j["emit"].get<std::vector<std::string>>();
  if (j.contains("defense")) cfg.defenses = {lgs::defenseFromJson(j["defense"].dump())};
  if (j.contains("defenses")) {
    cfg.defenses.clear();
    for (const auto& d : j["defenses"])
      cfg.defenses.push_back(lgs::defenseFromJson(d.dump()));
  }
  if (j.contains("patch")) {
    PatchRequest req;
    req.spec = lgs::patchFromJson(j["patch"].dump());
    if (j["patch"].value("placement", "explicit") == std::string("border")) {
      req.border = true;
      req.margin = j["patch"].value("margin", req.margin);
    }
    cfg.patch = req;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local gradients smoothing defense toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.workers = defaultWorkers();

  std::string configPath;
  std::string defenseKind = "lgs";
  double lambda = 2.3, gamma = 0.1, sigma = 0, sigmaSpace = 0, sigmaRange = 0.1;
  double tvmWeight = 10, tvmTol = 2e-4;
  lgs::Index block = 15, overlap = 5, window = 0;
  int depth = 3, quality = 30, tvmMaxIters = 200;
  std::string defenseSet;

  std::string patchPreset;
  lgs::Index patchSize = 0, patchTop = 0, patchLeft = 0, margin = 75;
  std::string placement = "explicit", noiseKind = "uniform";
  lgs::Index noisePeriod = 1;
  double noiseValue = 1.0;
  std::uint64_t noiseSeed = 0;

  auto addCommon = [&](CLI::App* sub, bool needsOutput) {
    sub->add_option("inputs", cfg.inputs, "input images (paths or globs)");
    auto* out = sub->add_option("-o,--output", cfg.output, "output directory");
    if (needsOutput) out->required();
    sub->add_option("--config", configPath, "JSON config file (flags win)");
    sub->add_option("--workers", cfg.workers, "worker threads (default: env LGS_WORKERS)");
    sub->add_option("--seed", cfg.seed, "global seed");
    sub->add_option("--emit", cfg.emit, "outputs to write: png pnm json csv")
        ->check(CLI::IsMember({"png", "pnm", "json", "csv"}));
  };

  auto addDefenseFlags = [&](CLI::App* sub) {
    sub->add_option("--defense", defenseKind, "defense kind: lgs mf gf bf br jpeg tvm")
        ->check(CLI::IsMember({"lgs", "mf", "median", "gf", "gaussian", "bf", "bilateral",
                               "br", "bitdepth", "jpeg", "tvm"}));
    sub->add_option("--lambda", lambda, "LGS smoothing factor");
    sub->add_option("--block", block, "LGS block side");
    sub->add_option("--overlap", overlap, "LGS block overlap");
    sub->add_option("--gamma", gamma, "LGS block-mean threshold");
    sub->add_option("--window", window, "filter window (odd)");
    sub->add_option("--sigma", sigma, "gaussian sigma (default window/6)");
    sub->add_option("--sigma-space", sigmaSpace, "bilateral spatial sigma");
    sub->add_option("--sigma-range", sigmaRange, "bilateral range sigma");
    sub->add_option("--depth", depth, "bit depth 1..8");
    sub->add_option("--quality", quality, "jpeg quality 1..100");
    sub->add_option("--weight", tvmWeight, "tvm weight (larger smooths more)");
    sub->add_option("--tvm-max-iters", tvmMaxIters, "tvm iteration cap");
    sub->add_option("--tvm-tol", tvmTol, "tvm relative objective tolerance");
  };

  auto addPatchFlags = [&](CLI::App* sub) {
    sub->add_option("--patch", patchPreset, "preset: lavan42 lavan52 lavan60 patch95");
    sub->add_option("--size", patchSize, "patch side in pixels");
    sub->add_option("--placement", placement, "explicit | border")
        ->check(CLI::IsMember({"explicit", "border"}));
    sub->add_option("--top", patchTop, "patch top row (explicit placement)");
    sub->add_option("--left", patchLeft, "patch left column (explicit placement)");
    sub->add_option("--margin", margin, "border band width for border placement");
    sub->add_option("--noise", noiseKind, "uniform | checkerboard | solid")
        ->check(CLI::IsMember({"uniform", "checkerboard", "solid"}));
    sub->add_option("--period", noisePeriod, "checkerboard cell side");
    sub->add_option("--value", noiseValue, "solid noise value");
    sub->add_option("--noise-seed", noiseSeed, "uniform noise seed (default --seed)");
  };

  CLI::App* defend = app.add_subcommand("defend", "transform images with a defense");
  addCommon(defend, true);
  addDefenseFlags(defend);
  defend->add_flag("--dump-intermediates", cfg.dumpIntermediates,
                   "write gradient/windowed/mask maps (lgs only)");

  CLI::App* simulate = app.add_subcommand("simulate", "write patched images + truth masks");
  addCommon(simulate, true);
  addPatchFlags(simulate);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "run defenses against patches, emit reports");
  addCommon(evaluate, true);
  addDefenseFlags(evaluate);
  addPatchFlags(evaluate);
  evaluate->add_option("--defense-set", defenseSet, "full | lgs-sweep")
      ->check(CLI::IsMember({"full", "lgs-sweep"}));

  CLI::App* batch = app.add_subcommand("batch", "config-file-driven evaluate");
  batch->add_option("--config", configPath, "JSON config file")->required();
  batch->add_option("--workers", cfg.workers, "worker threads override");

  CLI::App* inspect = app.add_subcommand("inspect", "print stats, dump gradient maps");
  addCommon(inspect, false);
  addDefenseFlags(inspect);

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  auto used = [&](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt && opt->count() > 0;
  };

  try {
    if (!configPath.empty()) {
      RunConfig fromFile;
      fromFile.workers = cfg.workers;
      mergeConfigFile(fromFile, configPath);
      // flags win over file values
      if (!cfg.inputs.empty()) fromFile.inputs = cfg.inputs;
      if (!cfg.output.empty()) fromFile.output = cfg.output;
      if (used("--workers")) fromFile.workers = cfg.workers;
      if (used("--seed")) fromFile.seed = cfg.seed;
      if (!cfg.emit.empty()) fromFile.emit = cfg.emit;
      fromFile.dumpIntermediates = cfg.dumpIntermediates;
      cfg = fromFile;
    }

    const bool defenseFlagsUsed =
        used("--defense") || used("--lambda") || used("--window") ||
        used("--depth") || used("--quality") || used("--weight") ||
        used("--block") || used("--overlap") || used("--gamma");
    if (cfg.defenses.empty() || defenseFlagsUsed) {
      lgs::DefenseConfig d;
      if (defenseKind == "lgs") {
        lgs::LgsParams p;
        p.lambda = lambda;
        p.block = block;
        p.overlap = overlap;
        p.gamma = gamma;
        d.params = p;
      } else if (defenseKind == "mf" || defenseKind == "median") {
        d.params = lgs::MedianParams{window > 0 ? window : 3};
      } else if (defenseKind == "gf" || defenseKind == "gaussian") {
        d.params = lgs::GaussianParams{window > 0 ? window : 5, sigma};
      } else if (defenseKind == "bf" || defenseKind == "bilateral") {
        d.params = lgs::BilateralParams{window > 0 ? window : 5, sigmaSpace, sigmaRange};
      } else if (defenseKind == "br" || defenseKind == "bitdepth") {
        d.params = lgs::BitDepthParams{depth};
      } else if (defenseKind == "jpeg") {
        d.params = lgs::JpegParams{quality};
      } else {
        d.params = lgs::TvmParams{tvmWeight, tvmMaxIters, tvmTol};
      }
      d.validate();
      cfg.defenses = {d};
    }
    if (defenseSet == "full") cfg.defenses = lgs::fullDefenseGrid();
    if (defenseSet == "lgs-sweep") cfg.defenses = lgs::lgsLambdaSweep();

    const bool patchFlagsUsed = used("--patch") || used("--size");
    const bool needsPatch = sub == simulate || sub == evaluate;
    if (patchFlagsUsed || (needsPatch && !cfg.patch)) {
      PatchRequest req;
      if (!patchPreset.empty())
        req.spec.size = lgs::presetPatchSize(patchPreset);
      else if (patchSize > 0)
        req.spec.size = patchSize;
      else
        throw std::runtime_error("a patch (--patch preset or --size) is required");
      req.spec.top = patchTop;
      req.spec.left = patchLeft;
      if (noiseKind == "uniform")
        req.spec.noise =
            lgs::UniformNoise{used("--noise-seed") ? noiseSeed : cfg.seed};
      else if (noiseKind == "checkerboard")
        req.spec.noise = lgs::CheckerboardNoise{noisePeriod};
      else
        req.spec.noise = lgs::SolidNoise{noiseValue};
      req.border = placement == "border";
      req.margin = margin;
      cfg.patch = req;
    }

    if (sub == defend) return cmdDefend(cfg);
    if (sub == simulate) return cmdSimulate(cfg);
    if (sub == evaluate || sub == batch) return cmdEvaluate(cfg);
    if (sub == inspect) return cmdInspect(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
