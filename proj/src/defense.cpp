#include "lgs/defense.hpp"

#include "lgs/filters.hpp"
#include "lgs/jpeg.hpp"
#include "lgs/patch.hpp"
#include "lgs/tvm.hpp"

#include <json.hpp>

#include <sstream>

namespace lgs {

namespace {

using nlohmann::json;

std::string trimNumber(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double effectiveSigma(Index window, double sigma) {
  return sigma > 0 ? sigma : static_cast<double>(window) / 6.0;
}

}  // namespace

std::string DefenseConfig::kind() const {
  switch (params.index()) {
    case 0: return "lgs";
    case 1: return "median";
    case 2: return "gaussian";
    case 3: return "bilateral";
    case 4: return "bitdepth";
    case 5: return "jpeg";
    default: return "tvm";
  }
}

std::string DefenseConfig::shortLabel() const {
  switch (params.index()) {
    case 0: return "LGS";
    case 1: return "MF";
    case 2: return "GF";
    case 3: return "BF";
    case 4: return "BR";
    case 5: return "JPEG";
    default: return "TVM";
  }
}

std::string DefenseConfig::paramsLabel() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<LgsParams>(&params)) {
    os << "lambda=" << trimNumber(p->lambda) << " block=" << p->block
       << " overlap=" << p->overlap << " gamma=" << trimNumber(p->gamma);
  } else if (const auto* p = std::get_if<MedianParams>(&params)) {
    os << "window=" << p->window;
  } else if (const auto* p = std::get_if<GaussianParams>(&params)) {
    os << "window=" << p->window << " sigma=" << trimNumber(effectiveSigma(p->window, p->sigma));
  } else if (const auto* p = std::get_if<BilateralParams>(&params)) {
    os << "window=" << p->window
       << " sigma_space=" << trimNumber(effectiveSigma(p->window, p->sigmaSpace))
       << " sigma_range=" << trimNumber(p->sigmaRange);
  } else if (const auto* p = std::get_if<BitDepthParams>(&params)) {
    os << "depth=" << p->depth;
  } else if (const auto* p = std::get_if<JpegParams>(&params)) {
    os << "quality=" << p->quality;
  } else {
    const auto& tp = std::get<TvmParams>(params);
    os << "weight=" << trimNumber(tp.weight) << " max_iters=" << tp.maxIters
       << " tol=" << trimNumber(tp.tol);
  }
  return os.str();
}

void DefenseConfig::validate() const {
  if (const auto* p = std::get_if<LgsParams>(&params)) {
    p->validate();
  } else if (const auto* p = std::get_if<MedianParams>(&params)) {
    if (p->window < 1 || p->window % 2 == 0)
      throw std::invalid_argument("median: window must be odd and >= 1");
  } else if (const auto* p = std::get_if<GaussianParams>(&params)) {
    if (p->window < 1 || p->window % 2 == 0)
      throw std::invalid_argument("gaussian: window must be odd and >= 1");
  } else if (const auto* p = std::get_if<BilateralParams>(&params)) {
    if (p->window < 1 || p->window % 2 == 0)
      throw std::invalid_argument("bilateral: window must be odd and >= 1");
    if (!(p->sigmaRange > 0))
      throw std::invalid_argument("bilateral: sigma_range must be > 0");
  } else if (const auto* p = std::get_if<BitDepthParams>(&params)) {
    if (p->depth < 1 || p->depth > 8)
      throw std::invalid_argument("bitdepth: depth must be in [1, 8]");
  } else if (const auto* p = std::get_if<JpegParams>(&params)) {
    if (p->quality < 1 || p->quality > 100)
      throw std::invalid_argument("jpeg: quality must be in [1, 100]");
  } else {
    const auto& tp = std::get<TvmParams>(params);
    if (!(tp.weight > 0)) throw std::invalid_argument("tvm: weight must be > 0");
    if (tp.maxIters < 1) throw std::invalid_argument("tvm: max_iters must be >= 1");
    if (!(tp.tol > 0)) throw std::invalid_argument("tvm: tol must be > 0");
  }
}

Image applyDefense(const Image& img, const DefenseConfig& cfg, DefenseRunInfo* info) {
  cfg.validate();
  if (const auto* p = std::get_if<LgsParams>(&cfg.params)) return lgsTransform(img, *p);
  if (const auto* p = std::get_if<MedianParams>(&cfg.params))
    return medianFilter(img, p->window);
  if (const auto* p = std::get_if<GaussianParams>(&cfg.params))
    return gaussianFilter(img, p->window, effectiveSigma(p->window, p->sigma));
  if (const auto* p = std::get_if<BilateralParams>(&cfg.params))
    return bilateralFilter(img, p->window, effectiveSigma(p->window, p->sigmaSpace),
                           p->sigmaRange);
  if (const auto* p = std::get_if<BitDepthParams>(&cfg.params))
    return bitDepthReduce(img, p->depth);
  if (const auto* p = std::get_if<JpegParams>(&cfg.params))
    return jpegTransform(img, p->quality);
  const auto& tp = std::get<TvmParams>(cfg.params);
  TvmResult r = tvmDenoise(img, tp.weight, tp.maxIters, tp.tol);
  if (info) {
    info->tvmConverged = r.converged;
    info->tvmIterations = r.iterations;
  }
  return std::move(r.image);
}

std::string defenseToJson(const DefenseConfig& cfg) {
  json j;
  j["kind"] = cfg.kind();
  json p;
  if (const auto* q = std::get_if<LgsParams>(&cfg.params)) {
    p["lambda"] = q->lambda;
    p["block"] = q->block;
    p["overlap"] = q->overlap;
    p["gamma"] = q->gamma;
  } else if (const auto* q = std::get_if<MedianParams>(&cfg.params)) {
    p["window"] = q->window;
  } else if (const auto* q = std::get_if<GaussianParams>(&cfg.params)) {
    p["window"] = q->window;
    p["sigma"] = effectiveSigma(q->window, q->sigma);
  } else if (const auto* q = std::get_if<BilateralParams>(&cfg.params)) {
    p["window"] = q->window;
    p["sigma_space"] = effectiveSigma(q->window, q->sigmaSpace);
    p["sigma_range"] = q->sigmaRange;
  } else if (const auto* q = std::get_if<BitDepthParams>(&cfg.params)) {
    p["depth"] = q->depth;
  } else if (const auto* q = std::get_if<JpegParams>(&cfg.params)) {
    p["quality"] = q->quality;
  } else {
    const auto& tq = std::get<TvmParams>(cfg.params);
    p["weight"] = tq.weight;
    p["max_iters"] = tq.maxIters;
    p["tol"] = tq.tol;
  }
  j["params"] = p;
  return j.dump();
}

DefenseConfig defenseFromJson(const std::string& text) {
  const json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  const json p = j.value("params", json::object());
  DefenseConfig cfg;
  if (kind == "lgs") {
    LgsParams q;
    q.lambda = p.value("lambda", q.lambda);
    q.block = p.value("block", q.block);
    q.overlap = p.value("overlap", q.overlap);
    q.gamma = p.value("gamma", q.gamma);
    cfg.params = q;
  } else if (kind == "median" || kind == "mf") {
    MedianParams q;
    q.window = p.value("window", q.window);
    cfg.params = q;
  } else if (kind == "gaussian" || kind == "gf") {
    GaussianParams q;
    q.window = p.value("window", q.window);
    q.sigma = p.value("sigma", q.sigma);
    cfg.params = q;
  } else if (kind == "bilateral" || kind == "bf") {
    BilateralParams q;
    q.window = p.value("window", q.window);
    q.sigmaSpace = p.value("sigma_space", q.sigmaSpace);
    q.sigmaRange = p.value("sigma_range", q.sigmaRange);
    cfg.params = q;
  } else if (kind == "bitdepth" || kind == "br") {
    BitDepthParams q;
    q.depth = p.value("depth", q.depth);
    cfg.params = q;
  } else if (kind == "jpeg") {
    JpegParams q;
    q.quality = p.value("quality", q.quality);
    cfg.params = q;
  } else if (kind == "tvm") {
    TvmParams q;
    q.weight = p.value("weight", q.weight);
    q.maxIters = p.value("max_iters", q.maxIters);
    q.tol = p.value("tol", q.tol);
    cfg.params = q;
  } else {
    throw std::invalid_argument("unknown defense kind: " + kind);
  }
  cfg.validate();
  return cfg;
}

std::string patchToJson(const PatchSpec& spec) {
  json j;
  j["size"] = spec.size;
  j["top"] = spec.top;
  j["left"] = spec.left;
  json n;
  if (const auto* u = std::get_if<UniformNoise>(&spec.noise)) {
    n["kind"] = "uniform";
    n["seed"] = u->seed;
  } else if (const auto* c = std::get_if<CheckerboardNoise>(&spec.noise)) {
    n["kind"] = "checkerboard";
    n["period"] = c->period;
  } else {
    n["kind"] = "solid";
    n["value"] = std::get<SolidNoise>(spec.noise).value;
  }
  j["noise"] = n;
  return j.dump();
}

PatchSpec patchFromJson(const std::string& text) {
  const json j = json::parse(text);
  PatchSpec spec;
  if (j.contains("preset"))
    spec.size = presetPatchSize(j.at("preset").get<std::string>());
  else
    spec.size = j.value("size", spec.size);
  spec.top = j.value("top", spec.top);
  spec.left = j.value("left", spec.left);
  if (j.contains("noise")) {
    const json n = j.at("noise");
    const std::string kind = n.value("kind", "uniform");
    if (kind == "uniform")
      spec.noise = UniformNoise{n.value("seed", std::uint64_t(0))};
    else if (kind == "checkerboard")
      spec.noise = CheckerboardNoise{n.value("period", Index(1))};
    else if (kind == "solid")
      spec.noise = SolidNoise{n.value("value", 1.0)};
    else
      throw std::invalid_argument("unknown noise kind: " + kind);
  }
  return spec;
}

std::vector<DefenseConfig> lgsLambdaSweep() {
  std::vector<DefenseConfig> out;
  for (double lambda : {1.5, 1.7, 1.9, 2.1, 2.3}) {
    LgsParams p;
    p.lambda = lambda;
    out.push_back(DefenseConfig{p});
  }
  return out;
}

std::vector<DefenseConfig> fullDefenseGrid() {
  std::vector<DefenseConfig> out = lgsLambdaSweep();
  out.push_back(DefenseConfig{MedianParams{3}});
  out.push_back(DefenseConfig{GaussianParams{5, 0}});
  out.push_back(DefenseConfig{BilateralParams{5, 0, 0.1}});
  for (int q : {10, 20, 30, 40, 60, 80}) out.push_back(DefenseConfig{JpegParams{q}});
  for (double w : {10.0, 20.0, 30.0}) out.push_back(DefenseConfig{TvmParams{w, 200, 2e-4}});
  for (int d : {1, 2, 3}) out.push_back(DefenseConfig{BitDepthParams{d}});
  return out;
}

}  // namespace lgs
