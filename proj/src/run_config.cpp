#include "xyqd/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "xyqd/spin_model.hpp"
#include "xyqd/version.hpp"

namespace xyqd {

using nlohmann::json;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::point: return "point";
    case Mode::sweep: return "sweep";
    case Mode::scan: return "scan";
    case Mode::fit: return "fit";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "point") return Mode::point;
  if (s == "sweep") return Mode::sweep;
  if (s == "scan") return Mode::scan;
  if (s == "fit") return Mode::fit;
  throw UsageError("mode: unknown value '" + s + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

std::string AnisotropyChoice::label() const {
  if (theta_degrees) return "theta" + format_number(*theta_degrees);
  return "gamma" + format_number(gamma);
}

void RunConfig::validate() const {
  if (mode == Mode::fit) {
    if (inputs.empty()) throw UsageError("inputs: fit needs series files");
  } else {
    if (gamma && !theta_degrees.empty()) throw UsageError("gamma: conflicts with theta_degrees; give only one");
    if (!gamma && theta_degrees.empty()) throw UsageError("theta_degrees: one of theta_degrees or gamma is required");
    if (gamma && !(*gamma >= 0.0 && *gamma <= 1.0)) throw UsageError("gamma: must lie in [0, 1]");
    for (double t : theta_degrees)
      if (!(t >= 0.0 && t <= 90.0)) throw UsageError("theta_degrees: values must lie in [0, 90]");
    if (sizes.empty()) throw UsageError("sizes: at least one chain size is required");
    for (int s : sizes)
      if (s < kMinSites || s > kMaxSites)
        throw UsageError("sizes: " + std::to_string(s) + " outside [" + std::to_string(kMinSites) + ", " +
                         std::to_string(kMaxSites) + "]");
    if (!std::isfinite(coupling)) throw UsageError("coupling: must be finite");
  }
  if (mode == Mode::sweep) {
    if (h) throw UsageError("h: sweep takes h_range, not a scalar h");
    if (!h_range) throw UsageError("h_range: sweep needs MIN MAX STEP");
    if (!(h_range->step > 0.0) || !(h_range->max >= h_range->min) || h_range->min < 0.0)
      throw UsageError("h_range: need 0 <= MIN <= MAX and STEP > 0");
  }
  if (mode == Mode::point || mode == Mode::scan) {
    if (h_range) throw UsageError("h_range: " + std::string(to_string(mode)) + " takes a scalar h");
    if (!h) throw UsageError("h: " + std::string(to_string(mode)) + " needs a field value");
    if (!(*h >= 0.0) || !std::isfinite(*h)) throw UsageError("h: must be finite and >= 0");
  }
  if (estimator != "total" && estimator != "pair")
    throw UsageError("estimator: unknown value '" + estimator + "' (total or pair)");
  if (formats.empty()) throw UsageError("format: at least one of csv, json");
  for (const auto& f : formats)
    if (f != "csv" && f != "json") throw UsageError("format: unknown format '" + f + "'");
  try {
    optimizer.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("optimizer: ") + e.what());
  }
}

std::vector<AnisotropyChoice> RunConfig::anisotropies() const {
  std::vector<AnisotropyChoice> out;
  if (gamma) out.push_back({*gamma, std::nullopt});
  for (double t : theta_degrees) {
    // sin(90 deg) must be exactly 1 so the Ising line validates.
    const double g = t == 90.0 ? 1.0 : std::sin(t * std::numbers::pi / 180.0);
    out.push_back({g, t});
  }
  return out;
}

bool RunConfig::wants(const std::string& format) const {
  for (const auto& f : formats)
    if (f == format) return true;
  return false;
}

json to_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["chain"] = {{"coupling", c.coupling}, {"sizes", c.sizes}, {"theta_degrees", c.theta_degrees}};
  j["chain"]["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["chain"]["h"] = c.h ? json(*c.h) : json(nullptr);
  j["chain"]["h_range"] =
      c.h_range ? json{{"min", c.h_range->min}, {"max", c.h_range->max}, {"step", c.h_range->step}} : json(nullptr);
  j["optimizer"] = {{"starts", c.optimizer.starts},
                    {"seed", c.optimizer.seed},
                    {"max_evals", c.optimizer.max_evals},
                    {"simplex_tolerance", c.optimizer.simplex_tolerance}};
  j["correlations"] = {{"wrap_pair", c.wrap_pair}, {"pair_only", c.pair_only}};
  j["fit"] = {{"estimator", c.estimator}};
  j["output"] = {{"dir", c.output_dir}, {"formats", c.formats}, {"force", c.force}};
  j["inputs"] = c.inputs;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("chain")) {
      const auto& ch = j.at("chain");
      if (ch.contains("coupling")) c.coupling = ch.at("coupling").get<double>();
      if (ch.contains("sizes")) c.sizes = ch.at("sizes").get<std::vector<int>>();
      if (ch.contains("theta_degrees")) c.theta_degrees = ch.at("theta_degrees").get<std::vector<double>>();
      if (ch.contains("gamma") && !ch.at("gamma").is_null()) c.gamma = ch.at("gamma").get<double>();
      if (ch.contains("h") && !ch.at("h").is_null()) c.h = ch.at("h").get<double>();
      if (ch.contains("h_range") && !ch.at("h_range").is_null()) {
        const auto& r = ch.at("h_range");
        c.h_range = FieldRange{r.at("min").get<double>(), r.at("max").get<double>(), r.at("step").get<double>()};
      }
    }
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      if (o.contains("starts")) c.optimizer.starts = o.at("starts").get<int>();
      if (o.contains("seed")) c.optimizer.seed = o.at("seed").get<std::uint64_t>();
      if (o.contains("max_evals")) c.optimizer.max_evals = o.at("max_evals").get<int>();
      if (o.contains("simplex_tolerance")) c.optimizer.simplex_tolerance = o.at("simplex_tolerance").get<double>();
    }
    if (j.contains("correlations")) {
      const auto& k = j.at("correlations");
      if (k.contains("wrap_pair")) c.wrap_pair = k.at("wrap_pair").get<bool>();
      if (k.contains("pair_only")) c.pair_only = k.at("pair_only").get<bool>();
    }
    if (j.contains("fit") && j.at("fit").contains("estimator"))
      c.estimator = j.at("fit").at("estimator").get<std::string>();
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.contains("dir")) c.output_dir = o.at("dir").get<std::string>();
      if (o.contains("formats")) c.formats = o.at("formats").get<std::vector<std::string>>();
      if (o.contains("force")) c.force = o.at("force").get<bool>();
    }
    if (j.contains("inputs")) c.inputs = j.at("inputs").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return c;
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j["output"].erase("dir");
  j["output"].erase("force");
  const std::string text = j.dump() + "|" + kToolVersion;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace xyqd
