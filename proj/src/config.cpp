#include "nlprobe/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nlprobe/errors.hpp"
#include "nlprobe/recovery.hpp"

namespace nlprobe {

namespace {

using Flat = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("config " + key + ": expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    throw ValidationError("config " + key + ": expected an integer, got '" + v + "'");
  }
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config " + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

Point to_point(const std::string& key, const std::string& v) {
  const auto l = to_list(key, v);
  if (l.size() == 1) return {l[0], 0.0};
  if (l.size() == 2) return {l[0], l[1]};
  throw ValidationError("config " + key + ": expected one or two numbers");
}

class Reader {
 public:
  explicit Reader(Flat flat) : flat_(std::move(flat)) {}

  const std::string* get(const std::string& key) {
    const auto it = flat_.find(key);
    if (it == flat_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  void num(const std::string& key, double& out) {
    if (auto v = get(key)) out = to_double(key, *v);
  }
  void integer(const std::string& key, int& out) {
    if (auto v = get(key)) out = to_int(key, *v);
  }
  void boolean(const std::string& key, bool& out) {
    if (auto v = get(key)) out = to_bool(key, *v);
  }
  void list(const std::string& key, std::vector<double>& out) {
    if (auto v = get(key)) out = to_list(key, *v);
  }
  void point(const std::string& key, Point& out) {
    if (auto v = get(key)) out = to_point(key, *v);
  }
  void text(const std::string& key, std::string& out) {
    if (auto v = get(key)) out = *v;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : flat_) {
      if (!used_.count(k)) throw ValidationError("config: unknown key '" + k + "'");
    }
  }

 private:
  Flat flat_;
  std::set<std::string> used_;
};

ExperimentConfig from_flat(Flat flat) {
  ExperimentConfig c;
  Reader r(std::move(flat));

  r.integer("model.dim", c.model.dim);
  r.integer("model.n", c.model.n);
  r.list("model.g_coeffs", c.model.g_coeffs);
  r.num("model.radius", c.model.radius);
  r.num("model.horizon", c.model.horizon);
  if (auto v = r.get("model.beta_kind")) {
    if (*v == "smooth") {
      c.model.beta.kind = BumpCoefficient::Kind::kSmooth;
    } else if (*v == "gaussian") {
      c.model.beta.kind = BumpCoefficient::Kind::kTruncatedGaussian;
    } else {
      throw ValidationError("config model.beta_kind: expected smooth or gaussian");
    }
  }
  r.num("model.beta_amplitude", c.model.beta.amplitude);
  r.num("model.beta_radius", c.model.beta.radius);
  r.num("model.beta_width", c.model.beta.width);
  r.point("model.beta_center", c.model.beta.center);

  r.num("probe.p", c.probe.p);
  r.num("probe.eps", c.probe.eps);
  r.point("probe.xi", c.probe.xi);
  if (auto v = r.get("probe.xi_angle")) c.probe.xi = unit_direction(to_double("probe.xi_angle", *v));
  r.integer("probe.directions", c.probe.directions);
  if (auto v = r.get("probe.a0_kind")) {
    if (*v == "gaussian") {
      c.probe.a0.kind = InitialProfile::Kind::kGaussian;
    } else if (*v == "constant") {
      c.probe.a0.kind = InitialProfile::Kind::kConstant;
    } else {
      throw ValidationError("config probe.a0_kind: expected gaussian or constant");
    }
  }
  r.num("probe.a0_amplitude", c.probe.a0.amplitude);
  r.num("probe.a0_width", c.probe.a0.width);
  r.point("probe.a0_center", c.probe.a0.center);

  r.integer("numerics.N", c.numerics.grid_points);
  r.num("numerics.L", c.numerics.half_length);
  r.num("numerics.nyquist", c.numerics.nyquist);
  r.num("numerics.dt", c.numerics.dt);
  r.integer("numerics.node_intervals", c.numerics.node_intervals);
  r.num("numerics.picard_tol", c.numerics.picard_tol);
  r.integer("numerics.picard_max_iter", c.numerics.picard_max_iter);
  r.integer("numerics.simpson_intervals", c.numerics.simpson_intervals);
  r.num("numerics.threshold", c.numerics.threshold);
  r.text("numerics.recover_mode", c.numerics.recover_mode);
  if (auto v = r.get("numerics.amplitude_source")) {
    if (*v == "analytic") {
      c.numerics.amplitude_source = AmplitudeSource::kAnalytic;
    } else if (*v == "measured") {
      c.numerics.amplitude_source = AmplitudeSource::kMeasured;
    } else {
      throw ValidationError("config numerics.amplitude_source: expected analytic or measured");
    }
  }
  r.integer("numerics.offsets", c.numerics.offsets);
  r.integer("numerics.fbp_N", c.numerics.fbp_points);
  r.boolean("numerics.checkpoint", c.numerics.checkpoint);

  r.list("sweep.eps", c.sweep.eps);
  if (auto v = r.get("sweep.predicted")) {
    if (*v != "auto") c.sweep.predicted = to_double("sweep.predicted", *v);
  }
  r.num("sweep.slope_tolerance", c.sweep.slope_tolerance);
  r.num("sweep.min_r2", c.sweep.min_r2);

  r.list("contraction.fractions", c.contraction.fractions);
  r.num("contraction.reject_fraction", c.contraction.reject_fraction);
  r.integer("contraction.N", c.contraction.grid_points);
  r.num("contraction.L", c.contraction.half_length);
  r.num("contraction.u0_width", c.contraction.u0_width);
  r.integer("contraction.random_trials", c.contraction.random_trials);

  r.text("fbp.sinogram", c.fbp.sinogram);

  r.text("output.dir", c.output.dir);
  if (auto v = r.get("output.formats")) c.output.formats = split_list(*v);

  r.integer("run.workers", c.workers);
  if (auto v = r.get("run.seed")) {
    const double d = to_double("run.seed", *v);
    if (d < 0 || d != std::floor(d)) throw ValidationError("config run.seed: expected a nonnegative integer");
    c.seed = static_cast<unsigned long long>(d);
  }

  r.reject_unknown();
  return c;
}

std::string json_scalar(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw ValidationError("config " + key + ": unsupported JSON value");
}

}  // namespace

bool OutputConfig::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

AnalyticNonlinearity ExperimentConfig::nonlinearity() const {
  return AnalyticNonlinearity(model.g_coeffs, model.radius);
}

ProbeParams ExperimentConfig::probe_params(double eps) const {
  ProbeParams p;
  p.dim = model.dim;
  p.n = model.n;
  p.p = probe.p;
  p.eps = eps;
  p.horizon = model.horizon;
  p.xi = probe.xi;
  p.a0 = probe.a0;
  return p;
}

Grid ExperimentConfig::grid_for(const ProbeParams& params) const {
  const Grid automatic = probe_grid(params, numerics.nyquist);
  if (numerics.grid_points == 0 && numerics.half_length == 0.0) return automatic;
  const double L = numerics.half_length > 0.0 ? numerics.half_length : automatic.half_length();
  const double w = params.a0.kind == InitialProfile::Kind::kGaussian ? params.a0.width : 1.0;
  const double reach = 3.0 * params.horizon + 8.0 * w / params.eps;
  if (L < reach) {
    throw ValidationError("grid-size rule L >= 3T + 8w/eps violated (L = " + std::to_string(L) +
                          ", need " + std::to_string(reach) + ")");
  }
  int n = numerics.grid_points;
  if (n == 0) {
    n = 8;
    while (n < 2.0 * L * numerics.nyquist / std::numbers::pi || n < 64) n *= 2;
  }
  return Grid(params.dim, n, L);
}

double ExperimentConfig::time_step(const ProbeParams& params) const {
  if (numerics.dt > 0.0) return numerics.dt;
  return std::min(1e-2, 0.1 * std::pow(params.eps, params.p));
}

ExperimentConfig parse_ini_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  Flat flat;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError("config: key '" + section + "' outside a [section]");
    for (const auto& [key, value] : body) flat[section + "." + key] = trim(value.data());
  }
  return from_flat(std::move(flat));
}

ExperimentConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be an object of sections");
  Flat flat;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ValidationError("config: section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      const std::string full = section + "." + key;
      if (value.is_array()) {
        std::string joined;
        for (const auto& e : value) joined += (joined.empty() ? "" : ",") + json_scalar(full, e);
        flat[full] = joined;
      } else {
        flat[full] = json_scalar(full, value);
      }
    }
  }
  return from_flat(std::move(flat));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open config " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (path.extension() == ".json" || (first != std::string::npos && text[first] == '{')) {
    return parse_json_config(text);
  }
  return parse_ini_config(text);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.model.dim != 1 && cfg.model.dim != 2) throw ValidationError("model.dim must be 1 or 2");
  if (cfg.workers < 1) throw ValidationError("workers must be >= 1");
  const AnalyticNonlinearity g = cfg.nonlinearity();
  cfg.model.beta.validate();
  if (cfg.model.dim == 1 && std::abs(std::abs(cfg.probe.xi[0]) - 1.0) > 1e-12) {
    throw ValidationError("1D probe direction must be +1 or -1");
  }
  std::vector<double> eps_used = cfg.sweep.eps;
  eps_used.push_back(cfg.probe.eps);
  for (double e : eps_used) {
    const ProbeParams p = cfg.probe_params(e);
    p.validate(g, cfg.model.beta);
    const Grid grid = cfg.grid_for(p);
    // delta0 check on the initial data, in the frame where xi is the first axis.
    ProbeParams frame = p;
    BumpCoefficient beta = cfg.model.beta;
    if (p.dim == 2) {
      frame.xi = {1.0, 0.0};
      frame.a0.center = {dot(p.xi, p.a0.center), dot(perpendicular(p.xi), p.a0.center)};
      beta = in_direction_frame(cfg.model.beta, p.xi);
    }
    initial_data(frame, g, beta, grid);
  }
  if (cfg.sweep.eps.size() < 4) throw ValidationError("sweep needs at least 4 eps values");
  if (!(cfg.numerics.threshold > 0.0 && cfg.numerics.threshold < 1.0)) {
    throw ValidationError("numerics.threshold must lie in (0, 1)");
  }
  if (cfg.numerics.recover_mode != "pde" && cfg.numerics.recover_mode != "exact") {
    throw ValidationError("numerics.recover_mode must be pde or exact");
  }
  if (cfg.numerics.node_intervals < 1) throw ValidationError("numerics.node_intervals must be >= 1");
  if (cfg.numerics.simpson_intervals < 64 || cfg.numerics.simpson_intervals % 2 != 0) {
    throw ValidationError("numerics.simpson_intervals must be even and >= 64");
  }
  if (cfg.model.dim == 2 && cfg.probe.directions < 16) {
    throw ValidationError("probe.directions must be >= 16 for 2D reconstruction");
  }
  if (cfg.numerics.offsets < 2) throw ValidationError("numerics.offsets must be >= 2");
  for (double f : cfg.contraction.fractions) {
    if (!(f >= 0.0 && f < 1.0)) throw ValidationError("contraction.fractions must lie in [0, 1)");
  }
  if (!(cfg.contraction.reject_fraction >= 1.0)) {
    throw ValidationError("contraction.reject_fraction must be >= 1");
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  const auto& b = c.model.beta;
  json j;
  j["model"] = {{"dim", c.model.dim},
                {"n", c.model.n},
                {"g_coeffs", c.model.g_coeffs},
                {"radius", c.model.radius},
                {"horizon", c.model.horizon},
                {"beta_kind", b.kind == BumpCoefficient::Kind::kSmooth ? "smooth" : "gaussian"},
                {"beta_amplitude", b.amplitude},
                {"beta_radius", b.radius},
                {"beta_width", b.width},
                {"beta_center", {b.center[0], b.center[1]}}};
  const auto& a0 = c.probe.a0;
  j["probe"] = {{"p", c.probe.p},
                {"eps", c.probe.eps},
                {"xi", {c.probe.xi[0], c.probe.xi[1]}},
                {"directions", c.probe.directions},
                {"a0_kind", a0.kind == InitialProfile::Kind::kGaussian ? "gaussian" : "constant"},
                {"a0_amplitude", a0.amplitude},
                {"a0_width", a0.width},
                {"a0_center", {a0.center[0], a0.center[1]}}};
  const auto& nm = c.numerics;
  j["numerics"] = {{"N", nm.grid_points},
                   {"L", nm.half_length},
                   {"nyquist", nm.nyquist},
                   {"dt", nm.dt},
                   {"node_intervals", nm.node_intervals},
                   {"picard_tol", nm.picard_tol},
                   {"picard_max_iter", nm.picard_max_iter},
                   {"simpson_intervals", nm.simpson_intervals},
                   {"threshold", nm.threshold},
                   {"recover_mode", nm.recover_mode},
                   {"amplitude_source",
                    nm.amplitude_source == AmplitudeSource::kAnalytic ? "analytic" : "measured"},
                   {"offsets", nm.offsets},
                   {"fbp_N", nm.fbp_points},
                   {"checkpoint", nm.checkpoint}};
  j["sweep"] = {{"eps", c.sweep.eps},
                {"slope_tolerance", c.sweep.slope_tolerance},
                {"min_r2", c.sweep.min_r2}};
  if (c.sweep.predicted) {
    j["sweep"]["predicted"] = *c.sweep.predicted;
  } else {
    j["sweep"]["predicted"] = "auto";
  }
  j["contraction"] = {{"fractions", c.contraction.fractions},
                      {"reject_fraction", c.contraction.reject_fraction},
                      {"N", c.contraction.grid_points},
                      {"L", c.contraction.half_length},
                      {"u0_width", c.contraction.u0_width},
                      {"random_trials", c.contraction.random_trials}};
  j["fbp"] = {{"sinogram", c.fbp.sinogram}};
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  j["run"] = {{"workers", c.workers}, {"seed", c.seed}};
  return j;
}

}  // namespace nlprobe
