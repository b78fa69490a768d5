#include "corrsync/cli/config.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace corrsync::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kAxes = {"xi", "g", "gamma", "nbar2", "delta"};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::Config, what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) config_error("'" + key + "' must be a number");
  return v.get<double>();
}

cplx complex_value(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  config_error("'" + key + "' must be a number or a [re, im] pair");
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

}  // namespace

std::vector<double> Sweep::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = i == count - 1 ? stop : start + (stop - start) * i / (count - 1);
  }
  return out;
}

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Spectrum: return "spectrum";
    case Subcommand::Trajectory: return "trajectory";
    case Subcommand::Steady: return "steady";
    case Subcommand::Validate: return "validate";
  }
  return "unknown";
}

Subcommand parse_subcommand(const std::string& s) {
  if (s == "spectrum") return Subcommand::Spectrum;
  if (s == "trajectory") return Subcommand::Trajectory;
  if (s == "steady") return Subcommand::Steady;
  if (s == "validate") return Subcommand::Validate;
  config_error("unknown subcommand '" + s + "'");
}

void apply_json(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) config_error("configuration must be a JSON object");
  reject_unknown(doc,
                 {"subcommand", "params", "model", "sweep", "series", "integrator", "initial", "output", "seed",
                  "validate", "debug", "threads"},
                 "configuration");

  if (doc.contains("subcommand")) cfg.subcommand = parse_subcommand(doc["subcommand"].get<std::string>());

  if (doc.contains("params")) {
    const json& p = doc["params"];
    reject_unknown(p, {"omega1", "omega2", "g", "gamma", "xi", "nbar1", "nbar2"}, "params");
    if (p.contains("omega1")) cfg.params.omega1 = number(p["omega1"], "omega1");
    if (p.contains("omega2")) cfg.params.omega2 = number(p["omega2"], "omega2");
    if (p.contains("g")) cfg.params.g = number(p["g"], "g");
    if (p.contains("gamma")) cfg.params.gamma = number(p["gamma"], "gamma");
    if (p.contains("xi")) cfg.params.xi = number(p["xi"], "xi");
    if (p.contains("nbar1")) cfg.params.nbar1 = number(p["nbar1"], "nbar1");
    if (p.contains("nbar2")) cfg.params.nbar2 = number(p["nbar2"], "nbar2");
  }

  if (doc.contains("model")) {
    const json& m = doc["model"];
    reject_unknown(m, {"diffusion"}, "model");
    if (m.contains("diffusion")) {
      const auto d = m["diffusion"].get<std::string>();
      if (d == "printed") {
        cfg.diffusion = DiffusionModel::Printed;
      } else if (d == "lindblad") {
        cfg.diffusion = DiffusionModel::Lindblad;
      } else {
        config_error("model.diffusion must be printed or lindblad");
      }
    }
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (s.is_null()) {
      cfg.sweep.reset();
    } else {
      reject_unknown(s, {"axis", "start", "stop", "count"}, "sweep");
      Sweep sw = cfg.sweep.value_or(Sweep{});
      if (s.contains("axis")) sw.axis = s["axis"].get<std::string>();
      if (s.contains("start")) sw.start = number(s["start"], "sweep.start");
      if (s.contains("stop")) sw.stop = number(s["stop"], "sweep.stop");
      if (s.contains("count")) {
        if (!s["count"].is_number_integer()) config_error("'sweep.count' must be an integer");
        sw.count = s["count"].get<int>();
      }
      cfg.sweep = sw;
    }
  }

  if (doc.contains("series")) {
    const json& s = doc["series"];
    if (s.is_null()) {
      cfg.series.reset();
    } else {
      reject_unknown(s, {"axis", "values"}, "series");
      Series se = cfg.series.value_or(Series{});
      if (s.contains("axis")) se.axis = s["axis"].get<std::string>();
      if (s.contains("values")) {
        if (!s["values"].is_array()) config_error("'series.values' must be an array");
        se.values.clear();
        for (const auto& v : s["values"]) se.values.push_back(number(v, "series.values"));
      }
      cfg.series = se;
    }
  }

  if (doc.contains("integrator")) {
    const json& i = doc["integrator"];
    reject_unknown(i, {"dt", "t_end"}, "integrator");
    if (i.contains("dt")) cfg.dt = number(i["dt"], "integrator.dt");
    if (i.contains("t_end")) {
      if (i["t_end"].is_null()) {
        cfg.t_end.reset();
      } else {
        cfg.t_end = number(i["t_end"], "integrator.t_end");
      }
    }
  }

  if (doc.contains("initial")) {
    const json& i = doc["initial"];
    reject_unknown(i, {"alpha1", "alpha2"}, "initial");
    if (i.contains("alpha1")) cfg.alpha1 = complex_value(i["alpha1"], "initial.alpha1");
    if (i.contains("alpha2")) cfg.alpha2 = complex_value(i["alpha2"], "initial.alpha2");
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
    if (o.contains("format")) {
      const auto f = o["format"].get<std::string>();
      if (f == "csv") {
        cfg.format = Format::Csv;
      } else if (f == "json") {
        cfg.format = Format::Json;
      } else {
        config_error("output.format must be csv or json");
      }
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) config_error("'seed' must be an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("validate")) {
    const json& v = doc["validate"];
    reject_unknown(v, {"corpus_size"}, "validate");
    if (v.contains("corpus_size")) cfg.corpus_size = v["corpus_size"].get<int>();
  }
  if (doc.contains("debug")) {
    const json& d = doc["debug"];
    reject_unknown(d, {"flip_diffusion_sign"}, "debug");
    if (d.contains("flip_diffusion_sign")) cfg.flip_diffusion_sign = d["flip_diffusion_sign"].get<bool>();
  }
  if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json patch = value;
  std::string path = key;
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (it->empty()) config_error("malformed key in override: " + key);
    patch = json{{*it, patch}};
  }
  try {
    apply_json(cfg, patch);
  } catch (const json::exception& e) {
    config_error("override '" + assignment + "': " + e.what());
  }
}

void check(const RunConfig& cfg) {
  try {
    (void)validate_params(cfg.params);
  } catch (const Error& e) {
    config_error(e.what());
  }
  if (cfg.sweep) {
    if (!kAxes.contains(cfg.sweep->axis)) config_error("unknown sweep axis '" + cfg.sweep->axis + "'");
    if (cfg.sweep->count < 2) config_error("sweep.count must be >= 2");
    if (cfg.sweep->start == cfg.sweep->stop) config_error("sweep.start must differ from sweep.stop");
    if (!std::isfinite(cfg.sweep->start) || !std::isfinite(cfg.sweep->stop)) {
      config_error("sweep bounds must be finite");
    }
  }
  if (cfg.series) {
    if (!kAxes.contains(cfg.series->axis)) config_error("unknown series axis '" + cfg.series->axis + "'");
    if (cfg.series->values.empty()) config_error("series.values must not be empty");
  }
  if (cfg.dt < 0.0) config_error("integrator.dt must be non-negative");
  if (cfg.t_end && !(*cfg.t_end >= 0.0)) config_error("integrator.t_end must be non-negative");
  if (cfg.corpus_size < 1) config_error("validate.corpus_size must be positive");
}

SystemParams with_axis(const SystemParams& p, const std::string& axis, double value) {
  SystemParams q = p;
  if (axis == "xi") {
    q.xi = value;
  } else if (axis == "g") {
    q.g = value;
  } else if (axis == "gamma") {
    q.gamma = value;
  } else if (axis == "nbar2") {
    q.nbar2 = value;
  } else if (axis == "delta") {
    q.omega2 = q.omega1 - value;
  } else {
    config_error("unknown axis '" + axis + "'");
  }
  return q;
}

double RunConfig::resolved_t_end() const {
  return t_end.value_or(100.0 * 2.0 * std::numbers::pi / params.omega1);
}

json RunConfig::to_json() const {
  json j;
  j["subcommand"] = std::string(to_string(subcommand));
  j["params"] = {{"omega1", params.omega1}, {"omega2", params.omega2}, {"g", params.g},
                 {"gamma", params.gamma},   {"xi", params.xi},         {"nbar1", params.nbar1},
                 {"nbar2", params.nbar2}};
  j["model"] = {{"diffusion", std::string(to_string(diffusion))}};
  j["sweep"] = sweep ? json{{"axis", sweep->axis}, {"start", sweep->start}, {"stop", sweep->stop},
                            {"count", sweep->count}}
                     : json(nullptr);
  j["series"] = series ? json{{"axis", series->axis}, {"values", series->values}} : json(nullptr);
  j["integrator"] = {{"dt", dt}, {"t_end", resolved_t_end()}};
  j["initial"] = {{"alpha1", complex_json(alpha1)}, {"alpha2", complex_json(alpha2)}};
  j["output"] = {{"path", output_path}, {"format", format == Format::Csv ? "csv" : "json"}};
  j["seed"] = seed;
  j["validate"] = {{"corpus_size", corpus_size}};
  j["debug"] = {{"flip_diffusion_sign", flip_diffusion_sign}};
  return j;
}

}  // namespace corrsync::cli
