#include "xyqd/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

#include "xyqd/version.hpp"

namespace xyqd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe, std::ios::binary);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::optional<RunOutcome> cached(const RunConfig& c, const fs::path& dir) {
  const fs::path env = dir / "envelope.json";
  if (c.force || !fs::exists(env)) return std::nullopt;
  RunOutcome out;
  out.directory = dir;
  out.skipped = true;
  out.envelope = envelope_from_json(json::parse(read_file(env)));
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

RunOutcome finish(const RunConfig& c, const fs::path& dir, json payload, const Timer& timer,
                  std::vector<fs::path> files) {
  RunOutcome out;
  out.directory = dir;
  out.envelope.config = to_json(c);
  out.envelope.tool_version = kToolVersion;
  out.envelope.seed = c.optimizer.seed;
  out.envelope.payload = std::move(payload);
  out.envelope.wall_time_seconds = timer.seconds();
  const fs::path env = dir / "envelope.json";
  write_file_atomic(env, to_json(out.envelope).dump(2) + "\n");
  files.push_back(env);
  out.files = std::move(files);
  return out;
}

CorrelationOptions correlation_options(const RunConfig& c) { return {c.wrap_pair, !c.pair_only}; }

}  // namespace

json to_json(const SweepSeries& s, const AnisotropyChoice& a) {
  json pts = json::array();
  for (const auto& p : s.points)
    pts.push_back({{"h", p.h},
                   {"total_gqd", number(p.total_gqd)},
                   {"nn_pair_sum", number(p.nn_pair_sum)},
                   {"residual", number(p.residual)},
                   {"ground_energy", number(p.ground_energy)},
                   {"fidelity_to_prev", number(p.fidelity_to_prev)},
                   {"degenerate", p.degenerate}});
  json params = {{"num_sites", s.params.num_sites}, {"coupling", s.params.coupling}, {"anisotropy", s.params.anisotropy}};
  params["theta_degrees"] = a.theta_degrees ? json(*a.theta_degrees) : json(nullptr);
  return {{"schema_version", kSchemaVersion}, {"params", params}, {"grid", s.grid}, {"points", pts}};
}

SweepSeries series_from_json(const json& j) {
  SweepSeries s;
  const auto& p = j.at("params");
  s.params = {p.at("num_sites").get<int>(), p.at("coupling").get<double>(), p.at("anisotropy").get<double>()};
  s.grid = j.at("grid").get<std::vector<double>>();
  for (const auto& q : j.at("points")) {
    SweepPoint sp;
    sp.h = q.at("h").get<double>();
    sp.total_gqd = number_from(q.at("total_gqd"));
    sp.nn_pair_sum = number_from(q.at("nn_pair_sum"));
    sp.residual = number_from(q.at("residual"));
    sp.ground_energy = number_from(q.at("ground_energy"));
    sp.fidelity_to_prev = number_from(q.at("fidelity_to_prev"));
    sp.degenerate = q.at("degenerate").get<bool>();
    s.points.push_back(sp);
  }
  return s;
}

json to_json(const ScalingFit& f) {
  json pts = json::array();
  for (const auto& p : f.points_used) pts.push_back({{"L", p.size}, {"h_c", p.h_c}});
  return {{"schema_version", kSchemaVersion},
          {"model", "h_c(L) = a * exp(-L / b) + c"},
          {"a", f.amplitude},
          {"b", f.decay_length},
          {"c", f.asymptote},
          {"rms_residual", f.rms_residual},
          {"iterations", f.iterations},
          {"points_used", pts}};
}

json to_json(const ResultEnvelope& e) {
  return {{"schema_version", kSchemaVersion},
          {"tool_version", e.tool_version},
          {"seed", e.seed},
          {"wall_time_seconds", e.wall_time_seconds},
          {"config", e.config},
          {"payload", e.payload}};
}

ResultEnvelope envelope_from_json(const json& j) {
  ResultEnvelope e;
  e.tool_version = j.at("tool_version").get<std::string>();
  e.seed = j.at("seed").get<std::uint64_t>();
  e.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  e.config = j.at("config");
  e.payload = j.at("payload");
  return e;
}

std::string sweep_csv(const SweepSeries& s) {
  std::string out = "h,total_gqd,nn_pair_sum,residual,ground_energy,fidelity_to_prev,degenerate\n";
  for (const auto& p : s.points) {
    out += format_number(p.h) + ',' + format_number(p.total_gqd) + ',' + format_number(p.nn_pair_sum) + ',' +
           format_number(p.residual) + ',' + format_number(p.ground_energy) + ',' +
           format_number(p.fidelity_to_prev) + ',' + (p.degenerate ? "1" : "0") + '\n';
  }
  return out;
}

SweepSeries parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("h,total_gqd,nn_pair_sum", 0) != 0)
    throw UsageError("input: not a sweep CSV (unexpected header)");
  auto parse = [](const std::string& cell) {
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (r.ec != std::errc{}) throw UsageError("input: bad number '" + cell + "'");
    return v;
  };
  SweepSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw UsageError("input: sweep CSV row must have 7 columns");
    SweepPoint p;
    p.h = parse(cells[0]);
    p.total_gqd = parse(cells[1]);
    p.nn_pair_sum = parse(cells[2]);
    p.residual = parse(cells[3]);
    p.ground_energy = parse(cells[4]);
    p.fidelity_to_prev = parse(cells[5]);
    p.degenerate = cells[6] == "1";
    s.grid.push_back(p.h);
    s.points.push_back(p);
  }
  return s;
}

std::string series_stem(const AnisotropyChoice& a, int size) {
  return "sweep_" + a.label() + "_L" + std::to_string(size);
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

fs::path result_directory(const RunConfig& c) {
  return fs::path(c.output_dir) / (std::string(to_string(c.mode)) + "-" + config_hash(c));
}

double critical_point_estimate(const SweepSeries& s, Quantity q) {
  for (const auto& p : s.points)
    if (std::isnan(value_of(p, q)))
      throw UsageError("estimator: series L=" + std::to_string(s.params.num_sites) +
                       " has no values for the chosen quantity (pair-only sweep?)");
  // Only the stretch after the last level crossing counts: cusps where the
  // ground state switches can exceed the smooth maximum at small sizes.
  std::size_t first = 0;
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].fidelity_to_prev < SuddenChangeThresholds{}.fidelity_threshold) first = i;
  if (s.points.size() - first < 3)
    throw NumericError("estimator: series L=" + std::to_string(s.params.num_sites) +
                       " has fewer than three points after its last level crossing");
  std::vector<double> h, y;
  for (std::size_t i = first; i < s.points.size(); ++i) {
    h.push_back(s.points[i].h);
    y.push_back(value_of(s.points[i], q));
  }
  return find_maximum(h, y).h_max;
}

RunOutcome run_point(const RunConfig& c) {
  c.validate();
  if (c.mode != Mode::point) throw UsageError("mode: run_point needs mode=point");
  const fs::path dir = result_directory(c);
  ensure_writable(dir);
  if (auto hit = cached(c, dir)) return *hit;
  Timer timer;

  json records = json::array();
  std::vector<fs::path> files;
  for (const auto& a : c.anisotropies()) {
    for (int size : c.sizes) {
      const ChainParams p{size, c.coupling, a.gamma, *c.h};
      const auto e = evaluate_point(p, c.optimizer, correlation_options(c));
      json r = {{"num_sites", size},
                {"anisotropy", a.gamma},
                {"h", *c.h},
                {"total_gqd", number(e.triple.total_gqd)},
                {"nn_pair_sum", number(e.triple.nn_pair_sum)},
                {"residual", number(e.triple.residual)},
                {"ground_energy", e.ground.energy},
                {"gap_to_next", e.ground.gap_to_next},
                {"degenerate", e.ground.degenerate}};
      r["theta_degrees"] = a.theta_degrees ? json(*a.theta_degrees) : json(nullptr);
      const std::string stem = "point_" + a.label() + "_L" + std::to_string(size);
      if (c.wants("json")) {
        json doc = r;
        doc["schema_version"] = kSchemaVersion;
        files.push_back(dir / (stem + ".json"));
        write_file_atomic(files.back(), doc.dump(2) + "\n");
      }
      if (c.wants("csv")) {
        std::string csv = "h,total_gqd,nn_pair_sum,residual,ground_energy,gap_to_next,degenerate\n";
        csv += format_number(*c.h) + ',' + format_number(e.triple.total_gqd) + ',' +
               format_number(e.triple.nn_pair_sum) + ',' + format_number(e.triple.residual) + ',' +
               format_number(e.ground.energy) + ',' + format_number(e.ground.gap_to_next) + ',' +
               (e.ground.degenerate ? "1" : "0") + '\n';
        files.push_back(dir / (stem + ".csv"));
        write_file_atomic(files.back(), csv);
      }
      records.push_back(std::move(r));
    }
  }
  return finish(c, dir, {{"points", records}}, timer, std::move(files));
}

RunOutcome run_sweep(const RunConfig& c) {
  c.validate();
  if (c.mode != Mode::sweep) throw UsageError("mode: run_sweep needs mode=sweep");
  const fs::path dir = result_directory(c);
  ensure_writable(dir);
  if (auto hit = cached(c, dir)) return *hit;
  Timer timer;

  const auto grid = make_grid(c.h_range->min, c.h_range->max, c.h_range->step);
  json all = json::array();
  std::vector<fs::path> files;
  for (const auto& a : c.anisotropies()) {
    for (int size : c.sizes) {
      const auto series = sweep_field({size, c.coupling, a.gamma}, grid, c.optimizer, correlation_options(c));
      const std::string stem = series_stem(a, size);
      json doc = to_json(series, a);
      if (c.wants("csv")) {
        files.push_back(dir / (stem + ".csv"));
        write_file_atomic(files.back(), sweep_csv(series));
      }
      if (c.wants("json")) {
        files.push_back(dir / (stem + ".json"));
        write_file_atomic(files.back(), doc.dump(2) + "\n");
      }
      all.push_back({{"name", stem}, {"series", std::move(doc)}});
    }
  }
  return finish(c, dir, {{"series", all}}, timer, std::move(files));
}

RunOutcome run_scan(const RunConfig& c) {
  c.validate();
  if (c.mode != Mode::scan) throw UsageError("mode: run_scan needs mode=scan");
  const fs::path dir = result_directory(c);
  ensure_writable(dir);
  if (auto hit = cached(c, dir)) return *hit;
  Timer timer;

  json rows = json::array();
  std::string csv = "theta_degrees,gamma,L,h,total_gqd,nn_pair_sum,residual,ground_energy,degenerate\n";
  for (const auto& a : c.anisotropies()) {
    for (int size : c.sizes) {
      const auto e = evaluate_point({size, c.coupling, a.gamma, *c.h}, c.optimizer, correlation_options(c));
      csv += (a.theta_degrees ? format_number(*a.theta_degrees) : std::string("nan")) + ',' +
             format_number(a.gamma) + ',' + std::to_string(size) + ',' + format_number(*c.h) + ',' +
             format_number(e.triple.total_gqd) + ',' + format_number(e.triple.nn_pair_sum) + ',' +
             format_number(e.triple.residual) + ',' + format_number(e.ground.energy) + ',' +
             (e.ground.degenerate ? "1" : "0") + '\n';
      json r = {{"gamma", a.gamma},
                {"num_sites", size},
                {"h", *c.h},
                {"total_gqd", number(e.triple.total_gqd)},
                {"nn_pair_sum", number(e.triple.nn_pair_sum)},
                {"residual", number(e.triple.residual)},
                {"ground_energy", e.ground.energy},
                {"degenerate", e.ground.degenerate}};
      r["theta_degrees"] = a.theta_degrees ? json(*a.theta_degrees) : json(nullptr);
      rows.push_back(std::move(r));
    }
  }
  std::vector<fs::path> files;
  if (c.wants("csv")) {
    files.push_back(dir / "scan.csv");
    write_file_atomic(files.back(), csv);
  }
  if (c.wants("json")) {
    files.push_back(dir / "scan.json");
    write_file_atomic(files.back(), json{{"schema_version", kSchemaVersion}, {"rows", rows}}.dump(2) + "\n");
  }
  return finish(c, dir, {{"rows", rows}}, timer, std::move(files));
}

RunOutcome run_fit(const RunConfig& c) {
  c.validate();
  if (c.mode != Mode::fit) throw UsageError("mode: run_fit needs mode=fit");
  if (c.inputs.size() < 4) throw UsageError("inputs: fit needs at least four series, got " + std::to_string(c.inputs.size()));

  // Sizes and anisotropy come from the JSON params, or from the file name for CSV.
  static const std::regex name_re(R"(sweep_(theta|gamma)([0-9.eE+-]+)_L([0-9]+)\.csv$)");
  const Quantity quantity = c.estimator == "pair" ? Quantity::nn_pair_sum : Quantity::total_gqd;
  std::map<int, double> estimates;
  std::optional<double> anisotropy;
  std::optional<std::string> label;
  for (const auto& in : c.inputs) {
    const fs::path path(in);
    SweepSeries s;
    double a = 0.0;
    std::string this_label;
    if (path.extension() == ".json") {
      json j = json::parse(read_file(path));
      if (j.contains("payload")) throw UsageError("input: " + in + " is an envelope; pass per-series files");
      s = series_from_json(j);
      a = s.params.anisotropy;
      const auto& t = j.at("params").at("theta_degrees");
      this_label = t.is_null() ? "gamma" + format_number(a) : "theta" + format_number(t.get<double>());
    } else {
      std::smatch m;
      const std::string name = path.filename().string();
      if (!std::regex_search(name, m, name_re)) throw UsageError("input: cannot infer size from " + in);
      s = parse_sweep_csv(read_file(path));
      const double v = std::stod(m[2].str());
      a = m[1] == "theta" ? std::sin(v * 3.14159265358979323846 / 180.0) : v;
      if (m[1] == "theta" && v == 90.0) a = 1.0;
      s.params.num_sites = std::stoi(m[3].str());
      this_label = m[1].str() + format_number(v);
    }
    if (anisotropy && std::abs(*anisotropy - a) > 1e-9)
      throw UsageError("inputs: inconsistent anisotropy across series (" + *label + " vs " + this_label + ")");
    anisotropy = a;
    label = this_label;
    if (estimates.count(s.params.num_sites))
      throw UsageError("inputs: duplicate chain size L=" + std::to_string(s.params.num_sites));
    estimates[s.params.num_sites] = critical_point_estimate(s, quantity);
  }
  if (estimates.size() < 4) throw UsageError("inputs: fit needs at least four distinct sizes");

  const fs::path dir = result_directory(c);
  ensure_writable(dir);
  if (auto hit = cached(c, dir)) return *hit;
  Timer timer;

  std::vector<SizePoint> pts;
  for (const auto& [size, hc] : estimates) pts.push_back({size, hc});
  const ScalingFit fit = fit_exponential_scaling(pts);
  json doc = to_json(fit);
  doc["series_label"] = *label;
  doc["estimator"] = c.estimator;
  doc["h_c_infinity"] = extrapolate_critical_point(fit);

  std::vector<fs::path> files;
  files.push_back(dir / "fit.json");
  write_file_atomic(files.back(), doc.dump(2) + "\n");
  std::string csv = "L,h_c\n";
  for (const auto& p : fit.points_used) csv += std::to_string(p.size) + ',' + format_number(p.h_c) + '\n';
  files.push_back(dir / "critical_points.csv");
  write_file_atomic(files.back(), csv);
  return finish(c, dir, doc, timer, std::move(files));
}

RunOutcome run(const RunConfig& c) {
  switch (c.mode) {
    case Mode::point: return run_point(c);
    case Mode::sweep: return run_sweep(c);
    case Mode::scan: return run_scan(c);
    case Mode::fit: return run_fit(c);
  }
  throw UsageError("mode: unknown");
}

}  // namespace xyqd
