#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xyqd/gqd.hpp"

namespace xyqd {

/// Invalid or conflicting configuration; the message names the field.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { point, sweep, scan, fit };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct FieldRange {
  double min = 0.0;
  double max = 1.5;
  double step = 0.01;
  friend bool operator==(const FieldRange&, const FieldRange&) = default;
};

/// One anisotropy value, labelled by how the user specified it.
struct AnisotropyChoice {
  double gamma = 0.0;
  std::optional<double> theta_degrees;

  /// "theta60" or "gamma0.5".
  std::string label() const;
};

struct RunConfig {
  Mode mode = Mode::sweep;
  double coupling = 1.0;
  std::optional<double> gamma;
  std::vector<double> theta_degrees;
  std::optional<double> h;
  std::optional<FieldRange> h_range;
  std::vector<int> sizes;
  OptimizerConfig optimizer;
  bool wrap_pair = false;
  bool pair_only = false;
  std::string estimator = "total";  // fit: maximum of "total" or "pair"
  std::string output_dir = "results";
  std::vector<std::string> formats{"csv", "json"};
  std::vector<std::string> inputs;  // series files for mode=fit
  bool force = false;

  /// Throws UsageError naming the offending field.
  void validate() const;

  /// gamma = sin(theta) for each theta, or the raw gamma.
  std::vector<AnisotropyChoice> anisotropies() const;
  bool wants(const std::string& format) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// FNV-1a over the canonical JSON of everything that affects the payload,
/// combined with the tool version. Hex, 16 characters.
std::string config_hash(const RunConfig& c);

/// 12 significant digits, locale independent.
std::string format_number(double v);

}  // namespace xyqd
