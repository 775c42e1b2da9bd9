#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "pswitch/disorder.hpp"
#include "pswitch/wavepacket.hpp"

namespace pswitch {

// Config schema summary (all units user-facing: wavelengths nm, rates as
// value/2pi in GHz, separations um, group velocity as a fraction of c):
//
//   name, description, experiment, seed, svg
//   layout: group_velocity_c + identical-chain shorthand
//           {cavity, count, separation_um} or explicit {cavities, links_um}
//   cavity: lambda_c_nm, lambda_e_nm (default lambda_c_nm), g_ghz, q_c,
//           q_u (absent = lossless), gamma_ghz
//   grid:   start_nm, stop_nm, points  (wavelength axis)
//   packet: center_nm, fwhm_nm
//   mode:   "transmission" | "reflection"
//   variants: [{label, mode, g_ghz, q_c, fwhm_nm}]  (overrides; shorthand only)
//   sweep:  sweep-d: {start_um, stop_um, step_um}
//           sweep-g: {values_ghz} or {start_ghz, stop_ghz, points, spacing}
//           sweep-n: {min_count, max_count}
//   disorder:   {target, mean, sigma, realizations}  (mean/sigma in the
//               target's unit: nm for wavelengths, um for separation, plain Q)
//   mitigation: {cavity_number (1-based), actions: [{action: "weak_g",
//               g_ghz} | {action: "detune_to", lambda_nm} |
//               {action: "decouple"}]}
//
// Unknown keys anywhere are rejected. Missing required structure is a
// config_error (exit 2); structurally complete but unphysical values are
// validation_errors (exit 3).

enum class ExperimentKind {
  spectrum,
  metrics,
  sweep_d,
  sweep_g,
  sweep_n,
  disorder,
  mitigation
};

inline const char* to_string(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::metrics: return "metrics";
    case ExperimentKind::sweep_d: return "sweep-d";
    case ExperimentKind::sweep_g: return "sweep-g";
    case ExperimentKind::sweep_n: return "sweep-n";
    case ExperimentKind::disorder: return "disorder";
    case ExperimentKind::mitigation: return "mitigation";
  }
  return "?";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
  for (ExperimentKind e :
       {ExperimentKind::spectrum, ExperimentKind::metrics, ExperimentKind::sweep_d,
        ExperimentKind::sweep_g, ExperimentKind::sweep_n, ExperimentKind::disorder,
        ExperimentKind::mitigation}) {
    if (s == to_string(e)) return e;
  }
  throw config_error("unknown experiment '" + s +
                     "' (expected spectrum, metrics, sweep-d, sweep-g, "
                     "sweep-n, disorder or mitigation)");
}

inline SwitchMode mode_from_string(const std::string& s) {
  if (s == "transmission") return SwitchMode::transmission;
  if (s == "reflection") return SwitchMode::reflection;
  throw config_error("unknown mode '" + s +
                     "' (expected transmission or reflection)");
}

inline DisorderTarget disorder_target_from_string(const std::string& s) {
  for (DisorderTarget t :
       {DisorderTarget::cavity_wavelength, DisorderTarget::emitter_wavelength,
        DisorderTarget::emitter_follows_cavity, DisorderTarget::coupled_q,
        DisorderTarget::separation}) {
    if (s == to_string(t)) return t;
  }
  throw config_error("unknown disorder target '" + s + "'");
}

struct CavityConfig {
  double lambda_c_nm = 1550.0;
  double lambda_e_nm = 1550.0;
  double g_ghz = 0.0;
  double q_c = 0.0;
  double q_u = std::numeric_limits<double>::infinity();
  double gamma_ghz = 0.0;
};

struct LayoutConfig {
  bool shorthand = true;
  // shorthand form (identical chain)
  std::optional<CavityConfig> cavity;  // may be absent when count == 0
  int count = 0;
  std::optional<double> separation_um;
  // explicit form
  std::vector<CavityConfig> cavities;
  std::vector<double> links_um;
  double group_velocity_c = 1.0;
};

struct GridConfig {
  double start_nm = 0.0;
  double stop_nm = 0.0;
  int points = 0;
};

struct PacketConfig {
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
};

struct VariantConfig {
  std::string label;
  std::optional<SwitchMode> mode;
  std::optional<double> g_ghz;
  std::optional<double> q_c;
  std::optional<double> fwhm_nm;
};

struct SweepDConfig {
  double start_um = 0.0;
  double stop_um = 0.0;
  double step_um = 0.0;
};

struct SweepGConfig {
  std::vector<double> values_ghz;  // resolved at parse time
};

struct SweepNConfig {
  int min_count = 0;
  int max_count = 0;
};

struct DisorderConfig {
  DisorderTarget target = DisorderTarget::cavity_wavelength;
  double mean = 0.0;  // target units (nm / um / plain Q)
  double sigma = 0.0;
  int realizations = 0;
};

struct MitigationActionConfig {
  MitigationAction::Kind kind = MitigationAction::Kind::weak_g;
  double g_ghz = 0.0;      // weak_g
  double lambda_nm = 0.0;  // detune_to
};

struct MitigationConfig {
  int cavity_number = 0;  // 1-based position in the chain
  std::vector<MitigationActionConfig> actions;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  ExperimentKind experiment = ExperimentKind::spectrum;
  LayoutConfig layout;
  std::optional<GridConfig> grid;
  std::optional<PacketConfig> packet;
  SwitchMode mode = SwitchMode::transmission;
  std::vector<VariantConfig> variants;
  std::optional<SweepDConfig> sweep_d;
  std::optional<SweepGConfig> sweep_g;
  std::optional<SweepNConfig> sweep_n;
  std::optional<DisorderConfig> disorder;
  std::optional<MitigationConfig> mitigation;
  std::uint64_t seed = 0;
  bool svg = true;
};

namespace detail {

// Strict object reader: every key must be consumed, leftovers are rejected.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw config_error(path_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const nlohmann::json& require(const char* key) {
    if (!j_.contains(key))
      throw config_error(path_ + ": missing required key '" + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  const nlohmann::json* optional(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  double number(const char* key) { return as_number(require(key), key); }
  double number_or(const char* key, double dflt) {
    const auto* v = optional(key);
    return v ? as_number(*v, key) : dflt;
  }
  int integer(const char* key) { return as_integer(require(key), key); }
  int integer_or(const char* key, int dflt) {
    const auto* v = optional(key);
    return v ? as_integer(*v, key) : dflt;
  }
  std::uint64_t u64_or(const char* key, std::uint64_t dflt) {
    const auto* v = optional(key);
    if (!v) return dflt;
    if (!v->is_number_integer() && !v->is_number_unsigned())
      throw config_error(sub(key) + ": must be a non-negative integer");
    if (v->is_number_integer() && v->get<std::int64_t>() < 0)
      throw config_error(sub(key) + ": must be a non-negative integer");
    return v->get<std::uint64_t>();
  }
  std::string str(const char* key) { return as_string(require(key), key); }
  std::string str_or(const char* key, const std::string& dflt) {
    const auto* v = optional(key);
    return v ? as_string(*v, key) : dflt;
  }
  bool flag_or(const char* key, bool dflt) {
    const auto* v = optional(key);
    if (!v) return dflt;
    if (!v->is_boolean()) throw config_error(sub(key) + ": must be a boolean");
    return v->get<bool>();
  }

  std::string sub(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw config_error(path_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  double as_number(const nlohmann::json& v, const char* key) const {
    if (!v.is_number()) throw config_error(sub(key) + ": must be a number");
    return v.get<double>();
  }
  int as_integer(const nlohmann::json& v, const char* key) const {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw config_error(sub(key) + ": must be an integer");
    return v.get<int>();
  }
  std::string as_string(const nlohmann::json& v, const char* key) const {
    if (!v.is_string()) throw config_error(sub(key) + ": must be a string");
    return v.get<std::string>();
  }

  const nlohmann::json& j_;
  std::set<std::string> seen_;
  std::string path_;
};

inline CavityConfig parse_cavity(const nlohmann::json& j, const std::string& path) {
  ObjectReader r(j, path);
  CavityConfig c;
  c.lambda_c_nm = r.number("lambda_c_nm");
  c.lambda_e_nm = r.number_or("lambda_e_nm", c.lambda_c_nm);
  c.g_ghz = r.number_or("g_ghz", 0.0);
  c.q_c = r.number("q_c");
  c.q_u = r.number_or("q_u", std::numeric_limits<double>::infinity());
  c.gamma_ghz = r.number_or("gamma_ghz", 0.0);
  r.finish();
  return c;
}

inline LayoutConfig parse_layout(const nlohmann::json& j, const std::string& path) {
  ObjectReader r(j, path);
  LayoutConfig layout;
  layout.group_velocity_c = r.number_or("group_velocity_c", 1.0);
  const bool explicit_form = r.has("cavities");
  const bool shorthand_form = r.has("cavity") || r.has("count");
  if (explicit_form && shorthand_form)
    throw config_error(path +
                       ": give either the identical-chain shorthand "
                       "(cavity/count/separation_um) or explicit "
                       "cavities/links_um, not both");
  if (explicit_form) {
    layout.shorthand = false;
    const auto& arr = r.require("cavities");
    if (!arr.is_array()) throw config_error(r.sub("cavities") + ": must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      layout.cavities.push_back(parse_cavity(
          arr[i], r.sub("cavities") + "[" + std::to_string(i) + "]"));
    }
    if (const auto* links = r.optional("links_um")) {
      if (!links->is_array())
        throw config_error(r.sub("links_um") + ": must be an array");
      for (const auto& v : *links) {
        if (!v.is_number())
          throw config_error(r.sub("links_um") + ": entries must be numbers");
        layout.links_um.push_back(v.get<double>());
      }
    }
    const std::size_t expected =
        layout.cavities.empty() ? 0 : layout.cavities.size() - 1;
    if (layout.links_um.size() != expected)
      throw config_error(path + ": expected " + std::to_string(expected) +
                         " links_um entries for " +
                         std::to_string(layout.cavities.size()) + " cavities");
  } else {
    layout.shorthand = true;
    layout.count = r.integer_or("count", 1);
    if (layout.count < 0)
      throw config_error(r.sub("count") + ": must be non-negative");
    if (const auto* c = r.optional("cavity"))
      layout.cavity = parse_cavity(*c, r.sub("cavity"));
    if (!layout.cavity && layout.count > 0)
      throw config_error(path + ": missing required key 'cavity'");
    if (r.has("separation_um")) layout.separation_um = r.number("separation_um");
    if (layout.count > 1 && !layout.separation_um)
      throw config_error(path +
                         ": 'separation_um' is required for more than one cavity");
  }
  r.finish();
  return layout;
}

inline VariantConfig parse_variant(const nlohmann::json& j, const std::string& path) {
  ObjectReader r(j, path);
  VariantConfig v;
  v.label = r.str("label");
  if (v.label.empty()) throw config_error(path + ": label must not be empty");
  if (r.has("mode")) v.mode = mode_from_string(r.str("mode"));
  if (r.has("g_ghz")) v.g_ghz = r.number("g_ghz");
  if (r.has("q_c")) v.q_c = r.number("q_c");
  if (r.has("fwhm_nm")) v.fwhm_nm = r.number("fwhm_nm");
  r.finish();
  return v;
}

inline std::vector<double> log_spaced(double start, double stop, int points) {
  if (!(start > 0.0) || !(stop > start))
    throw config_error("log-spaced sweep needs 0 < start < stop");
  if (points < 2) throw config_error("log-spaced sweep needs at least 2 points");
  std::vector<double> xs(static_cast<std::size_t>(points));
  const double l0 = std::log10(start), l1 = std::log10(stop);
  for (int k = 0; k < points; ++k) {
    xs[static_cast<std::size_t>(k)] =
        std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(k) /
                                static_cast<double>(points - 1));
  }
  xs.front() = start;  // endpoints exact
  xs.back() = stop;
  return xs;
}

inline std::vector<double> lin_spaced(double start, double stop, int points) {
  if (!(stop > start)) throw config_error("sweep needs start < stop");
  if (points < 2) throw config_error("sweep needs at least 2 points");
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    xs[static_cast<std::size_t>(k)] =
        start + (stop - start) * static_cast<double>(k) /
                    static_cast<double>(points - 1);
  }
  return xs;
}

inline MitigationActionConfig parse_action(const nlohmann::json& j,
                                           const std::string& path) {
  ObjectReader r(j, path);
  MitigationActionConfig a;
  const std::string kind = r.str("action");
  if (kind == "weak_g") {
    a.kind = MitigationAction::Kind::weak_g;
    a.g_ghz = r.number("g_ghz");
  } else if (kind == "detune_to") {
    a.kind = MitigationAction::Kind::detune_to;
    a.lambda_nm = r.number("lambda_nm");
  } else if (kind == "decouple") {
    a.kind = MitigationAction::Kind::decouple;
  } else {
    throw config_error(path + ": unknown action '" + kind +
                       "' (expected weak_g, detune_to or decouple)");
  }
  r.finish();
  return a;
}

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& root) {
  detail::ObjectReader r(root, "config");
  ScenarioConfig cfg;
  cfg.name = r.str_or("name", "");
  cfg.description = r.str_or("description", "");
  cfg.experiment = experiment_from_string(r.str("experiment"));
  cfg.layout = detail::parse_layout(r.require("layout"), "layout");
  if (const auto* g = r.optional("grid")) {
    detail::ObjectReader gr(*g, "grid");
    GridConfig grid;
    grid.start_nm = gr.number("start_nm");
    grid.stop_nm = gr.number("stop_nm");
    grid.points = gr.integer("points");
    gr.finish();
    cfg.grid = grid;
  }
  if (const auto* p = r.optional("packet")) {
    detail::ObjectReader pr(*p, "packet");
    PacketConfig packet;
    packet.center_nm = pr.number("center_nm");
    packet.fwhm_nm = pr.number("fwhm_nm");
    pr.finish();
    cfg.packet = packet;
  }
  if (r.has("mode")) cfg.mode = mode_from_string(r.str("mode"));
  if (const auto* vs = r.optional("variants")) {
    if (!vs->is_array()) throw config_error("variants: must be an array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < vs->size(); ++i) {
      auto v = detail::parse_variant((*vs)[i],
                                     "variants[" + std::to_string(i) + "]");
      if (!labels.insert(v.label).second)
        throw config_error("variants: duplicate label '" + v.label + "'");
      cfg.variants.push_back(std::move(v));
    }
    if (!cfg.layout.shorthand) {
      for (const auto& v : cfg.variants) {
        if (v.g_ghz || v.q_c)
          throw config_error(
              "variants: cavity overrides need the identical-chain shorthand");
      }
    }
  }

  const bool needs_packet = cfg.experiment == ExperimentKind::metrics ||
                            cfg.experiment == ExperimentKind::sweep_d ||
                            cfg.experiment == ExperimentKind::sweep_g ||
                            cfg.experiment == ExperimentKind::sweep_n;
  if (needs_packet && !cfg.packet)
    throw config_error("config: experiment '" +
                       std::string(to_string(cfg.experiment)) +
                       "' requires a packet section");

  const bool is_sweep = cfg.experiment == ExperimentKind::sweep_d ||
                        cfg.experiment == ExperimentKind::sweep_g ||
                        cfg.experiment == ExperimentKind::sweep_n;
  if (is_sweep && !cfg.layout.shorthand)
    throw config_error(
        "config: sweep experiments use the identical-chain layout shorthand");

  if (const auto* s = r.optional("sweep")) {
    detail::ObjectReader sr(*s, "sweep");
    switch (cfg.experiment) {
      case ExperimentKind::sweep_d: {
        SweepDConfig d;
        d.start_um = sr.number("start_um");
        d.stop_um = sr.number("stop_um");
        d.step_um = sr.number("step_um");
        cfg.sweep_d = d;
        break;
      }
      case ExperimentKind::sweep_g: {
        SweepGConfig g;
        if (const auto* vals = sr.optional("values_ghz")) {
          if (!vals->is_array() || vals->empty())
            throw config_error("sweep.values_ghz: must be a non-empty array");
          for (const auto& v : *vals) {
            if (!v.is_number())
              throw config_error("sweep.values_ghz: entries must be numbers");
            g.values_ghz.push_back(v.get<double>());
          }
        } else {
          const double start = sr.number("start_ghz");
          const double stop = sr.number("stop_ghz");
          const int points = sr.integer("points");
          const std::string spacing = sr.str_or("spacing", "linear");
          if (spacing == "log")
            g.values_ghz = detail::log_spaced(start, stop, points);
          else if (spacing == "linear")
            g.values_ghz = detail::lin_spaced(start, stop, points);
          else
            throw config_error("sweep.spacing: expected 'linear' or 'log'");
        }
        cfg.sweep_g = g;
        break;
      }
      case ExperimentKind::sweep_n: {
        SweepNConfig n;
        n.min_count = sr.integer("min_count");
        n.max_count = sr.integer("max_count");
        cfg.sweep_n = n;
        break;
      }
      default:
        throw config_error(
            "config: 'sweep' section is only valid for sweep experiments");
    }
    sr.finish();
  } else if (is_sweep) {
    throw config_error("config: sweep experiments require a sweep section");
  }

  if (const auto* d = r.optional("disorder")) {
    detail::ObjectReader dr(*d, "disorder");
    DisorderConfig dis;
    dis.target = disorder_target_from_string(dr.str("target"));
    dis.mean = dr.number("mean");
    dis.sigma = dr.number("sigma");
    dis.realizations = dr.integer("realizations");
    dr.finish();
    cfg.disorder = dis;
  }
  if (cfg.experiment == ExperimentKind::disorder && !cfg.disorder)
    throw config_error("config: disorder experiment requires a disorder section");
  if (cfg.disorder && cfg.experiment != ExperimentKind::disorder)
    throw config_error(
        "config: 'disorder' section is only valid for the disorder experiment");

  if (const auto* m = r.optional("mitigation")) {
    detail::ObjectReader mr(*m, "mitigation");
    MitigationConfig mit;
    mit.cavity_number = mr.integer("cavity_number");
    const auto& actions = mr.require("actions");
    if (!actions.is_array() || actions.empty())
      throw config_error("mitigation.actions: must be a non-empty array");
    for (std::size_t i = 0; i < actions.size(); ++i) {
      mit.actions.push_back(detail::parse_action(
          actions[i], "mitigation.actions[" + std::to_string(i) + "]"));
    }
    mr.finish();
    cfg.mitigation = mit;
  }
  if (cfg.experiment == ExperimentKind::mitigation && !cfg.mitigation)
    throw config_error(
        "config: mitigation experiment requires a mitigation section");
  if (cfg.mitigation && cfg.experiment != ExperimentKind::mitigation)
    throw config_error(
        "config: 'mitigation' section is only valid for the mitigation "
        "experiment");

  cfg.seed = r.u64_or("seed", 0);
  cfg.svg = r.flag_or("svg", true);
  r.finish();
  return cfg;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(root);
}

inline nlohmann::json cavity_to_json(const CavityConfig& c) {
  nlohmann::json j;
  j["lambda_c_nm"] = c.lambda_c_nm;
  j["lambda_e_nm"] = c.lambda_e_nm;
  j["g_ghz"] = c.g_ghz;
  j["q_c"] = c.q_c;
  if (std::isfinite(c.q_u)) j["q_u"] = c.q_u;
  j["gamma_ghz"] = c.gamma_ghz;
  return j;
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  if (!cfg.name.empty()) j["name"] = cfg.name;
  if (!cfg.description.empty()) j["description"] = cfg.description;
  j["experiment"] = to_string(cfg.experiment);
  nlohmann::json layout;
  if (cfg.layout.shorthand) {
    if (cfg.layout.cavity) layout["cavity"] = cavity_to_json(*cfg.layout.cavity);
    layout["count"] = cfg.layout.count;
    if (cfg.layout.separation_um) layout["separation_um"] = *cfg.layout.separation_um;
  } else {
    layout["cavities"] = nlohmann::json::array();
    for (const auto& c : cfg.layout.cavities)
      layout["cavities"].push_back(cavity_to_json(c));
    layout["links_um"] = cfg.layout.links_um;
  }
  layout["group_velocity_c"] = cfg.layout.group_velocity_c;
  j["layout"] = layout;
  if (cfg.grid) {
    j["grid"] = {{"start_nm", cfg.grid->start_nm},
                 {"stop_nm", cfg.grid->stop_nm},
                 {"points", cfg.grid->points}};
  }
  if (cfg.packet) {
    j["packet"] = {{"center_nm", cfg.packet->center_nm},
                   {"fwhm_nm", cfg.packet->fwhm_nm}};
  }
  j["mode"] = to_string(cfg.mode);
  if (!cfg.variants.empty()) {
    j["variants"] = nlohmann::json::array();
    for (const auto& v : cfg.variants) {
      nlohmann::json vj;
      vj["label"] = v.label;
      if (v.mode) vj["mode"] = to_string(*v.mode);
      if (v.g_ghz) vj["g_ghz"] = *v.g_ghz;
      if (v.q_c) vj["q_c"] = *v.q_c;
      if (v.fwhm_nm) vj["fwhm_nm"] = *v.fwhm_nm;
      j["variants"].push_back(vj);
    }
  }
  if (cfg.sweep_d) {
    j["sweep"] = {{"start_um", cfg.sweep_d->start_um},
                  {"stop_um", cfg.sweep_d->stop_um},
                  {"step_um", cfg.sweep_d->step_um}};
  }
  if (cfg.sweep_g) j["sweep"] = {{"values_ghz", cfg.sweep_g->values_ghz}};
  if (cfg.sweep_n) {
    j["sweep"] = {{"min_count", cfg.sweep_n->min_count},
                  {"max_count", cfg.sweep_n->max_count}};
  }
  if (cfg.disorder) {
    j["disorder"] = {{"target", to_string(cfg.disorder->target)},
                     {"mean", cfg.disorder->mean},
                     {"sigma", cfg.disorder->sigma},
                     {"realizations", cfg.disorder->realizations}};
  }
  if (cfg.mitigation) {
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : cfg.mitigation->actions) {
      nlohmann::json aj;
      switch (a.kind) {
        case MitigationAction::Kind::weak_g:
          aj["action"] = "weak_g";
          aj["g_ghz"] = a.g_ghz;
          break;
        case MitigationAction::Kind::detune_to:
          aj["action"] = "detune_to";
          aj["lambda_nm"] = a.lambda_nm;
          break;
        case MitigationAction::Kind::decouple:
          aj["action"] = "decouple";
          break;
      }
      actions.push_back(aj);
    }
    j["mitigation"] = {{"cavity_number", cfg.mitigation->cavity_number},
                       {"actions", actions}};
  }
  j["seed"] = cfg.seed;
  j["svg"] = cfg.svg;
  return j;
}

// Applies a "--set dotted.path=value" override to the raw JSON tree before
// parsing. Path segments that are non-negative integers index into arrays;
// the value is parsed as JSON when possible and kept as a string otherwise.
inline void apply_override(nlohmann::json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("override '" + assignment + "' is not of the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  std::vector<std::string> segments;
  std::size_t begin = 0;
  while (true) {
    const auto dot = path.find('.', begin);
    segments.push_back(path.substr(begin, dot - begin));
    if (segments.back().empty())
      throw config_error("override path '" + path + "' has an empty segment");
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }

  nlohmann::json* node = &root;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const std::string& seg = segments[i];
    const bool is_index = !seg.empty() &&
        seg.find_first_not_of("0123456789") == std::string::npos;
    if (is_index) {
      if (!node->is_array())
        throw config_error("override path '" + path + "': '" + seg +
                           "' indexes a non-array");
      const auto idx = static_cast<std::size_t>(std::stoul(seg));
      if (idx >= node->size())
        throw config_error("override path '" + path + "': index " + seg +
                           " out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) {
        if (node->is_null())
          *node = nlohmann::json::object();
        else
          throw config_error("override path '" + path + "': '" + seg +
                             "' descends into a non-object");
      }
      node = &(*node)[seg];
    }
  }

  const std::string& last = segments.back();
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;  // bare strings need no quotes
  const bool last_is_index = !last.empty() &&
      last.find_first_not_of("0123456789") == std::string::npos;
  if (last_is_index && node->is_array()) {
    const auto idx = static_cast<std::size_t>(std::stoul(last));
    if (idx >= node->size())
      throw config_error("override path '" + path + "': index " + last +
                         " out of range");
    (*node)[idx] = value;
  } else {
    if (node->is_null()) *node = nlohmann::json::object();
    if (!node->is_object())
      throw config_error("override path '" + path +
                         "': cannot set a key on a non-object");
    (*node)[last] = value;
  }
}

// ---- conversion to domain objects ------------------------------------------

inline CavityDesign design_from_cavity(const CavityConfig& c) {
  CavityDesign d;
  d.lambda_c = c.lambda_c_nm * nm;
  d.lambda_e = c.lambda_e_nm * nm;
  d.g = angular_from_hz(c.g_ghz * ghz);
  d.q_coupled = c.q_c;
  d.q_intrinsic = c.q_u;
  d.gamma = angular_from_hz(c.gamma_ghz * ghz);
  return d;
}

inline SwitchDesign design_from_config(const LayoutConfig& layout) {
  const double v_g = layout.group_velocity_c * speed_of_light;
  if (layout.shorthand) {
    if (layout.count == 0) {
      SwitchDesign d;
      d.v_g = v_g;
      return d;
    }
    return chain_design(design_from_cavity(*layout.cavity), layout.count,
                        layout.separation_um.value_or(0.0) * um, v_g);
  }
  SwitchDesign d;
  d.v_g = v_g;
  for (const auto& c : layout.cavities) d.cavities.push_back(design_from_cavity(c));
  for (double link : layout.links_um) d.separations.push_back(link * um);
  return d;
}

inline SpectralGrid grid_from_config(const GridConfig& grid) {
  return {SpectralAxis::wavelength_nm, grid.start_nm, grid.stop_nm, grid.points};
}

// Explicit grid when given, otherwise 10 nm around the packet centre (if any)
// or around the mean cavity wavelength, 2001 points.
inline SpectralGrid effective_grid(const ScenarioConfig& cfg) {
  if (cfg.grid) return grid_from_config(*cfg.grid);
  double center_nm = 1550.0;
  if (cfg.packet) {
    center_nm = cfg.packet->center_nm;
  } else if (cfg.layout.shorthand && cfg.layout.cavity) {
    center_nm = cfg.layout.cavity->lambda_c_nm;
  } else if (!cfg.layout.cavities.empty()) {
    double sum = 0.0;
    for (const auto& c : cfg.layout.cavities) sum += c.lambda_c_nm;
    center_nm = sum / static_cast<double>(cfg.layout.cavities.size());
  }
  return {SpectralAxis::wavelength_nm, center_nm - 5.0, center_nm + 5.0, 2001};
}

inline WavePacketSpec packet_from_config(const PacketConfig& p) {
  return {p.center_nm * nm, p.fwhm_nm * nm};
}

inline DisorderSpec disorder_from_config(const DisorderConfig& d,
                                         std::uint64_t seed) {
  DisorderSpec spec;
  spec.target = d.target;
  const double unit = (d.target == DisorderTarget::coupled_q) ? 1.0
                      : (d.target == DisorderTarget::separation) ? um
                                                                 : nm;
  spec.mean = d.mean * unit;
  spec.sigma = d.sigma * unit;
  spec.realizations = d.realizations;
  spec.seed = seed;
  return spec;
}

inline MitigationAction action_from_config(const MitigationActionConfig& a) {
  MitigationAction act;
  act.kind = a.kind;
  if (a.kind == MitigationAction::Kind::weak_g)
    act.g = angular_from_hz(a.g_ghz * ghz);
  if (a.kind == MitigationAction::Kind::detune_to) act.lambda = a.lambda_nm * nm;
  return act;
}

// Full cross-field validation; throws validation_error on unphysical input.
inline void validate_config(const ScenarioConfig& cfg) {
  const SwitchDesign design = design_from_config(cfg.layout);
  validate_layout_or_throw(to_layout(design));
  validate_grid(effective_grid(cfg));
  if (cfg.packet) validate_packet(packet_from_config(*cfg.packet));
  if (cfg.sweep_d)
    sweep_points(cfg.sweep_d->start_um, cfg.sweep_d->stop_um, cfg.sweep_d->step_um);
  if (cfg.sweep_g) {
    for (double g : cfg.sweep_g->values_ghz) {
      if (!(g >= 0.0))
        throw validation_error("sweep coupling values must be non-negative");
    }
  }
  if (cfg.sweep_n) {
    if (cfg.sweep_n->min_count < 0 || cfg.sweep_n->max_count < cfg.sweep_n->min_count)
      throw validation_error("sweep needs 0 <= min_count <= max_count");
  }
  if (cfg.disorder) validate_disorder(disorder_from_config(*cfg.disorder, cfg.seed));
  if (cfg.mitigation) {
    const int n = static_cast<int>(design.cavities.size());
    if (cfg.mitigation->cavity_number < 1 || cfg.mitigation->cavity_number > n)
      throw validation_error("mitigation cavity_number must be between 1 and " +
                             std::to_string(n));
    for (const auto& a : cfg.mitigation->actions) {
      if (a.kind == MitigationAction::Kind::weak_g && !(a.g_ghz >= 0.0))
        throw validation_error("mitigation weak_g rate must be non-negative");
      if (a.kind == MitigationAction::Kind::detune_to && !(a.lambda_nm > 0.0))
        throw validation_error("mitigation detune_to wavelength must be positive");
    }
  }
  // variant overrides must themselves yield valid cavities
  if (cfg.layout.shorthand && cfg.layout.cavity) {
    for (const auto& v : cfg.variants) {
      CavityConfig c = *cfg.layout.cavity;
      if (v.g_ghz) c.g_ghz = *v.g_ghz;
      if (v.q_c) c.q_c = *v.q_c;
      params_from_design(design_from_cavity(c));
      if (v.fwhm_nm && cfg.packet) {
        PacketConfig p = *cfg.packet;
        p.fwhm_nm = *v.fwhm_nm;
        validate_packet(packet_from_config(p));
      }
    }
  }
}

}  // namespace pswitch
