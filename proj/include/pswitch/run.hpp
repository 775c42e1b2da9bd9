#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pswitch/config.hpp"
#include "pswitch/csv.hpp"
#include "pswitch/manifest.hpp"
#include "pswitch/svg.hpp"
#include "pswitch/version.hpp"

namespace pswitch {

struct RunResult {
  std::string name;
  ExperimentKind experiment = ExperimentKind::spectrum;
  std::uint64_t seed = 0;
  std::int64_t wall_ms = 0;
  std::vector<std::string> files;  // full paths, in write order
  std::string console;             // human-readable result summary
};

namespace detail {

inline std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
    out.push_back(ok ? ch : '-');
  }
  return out.empty() ? std::string("run") : out;
}

inline std::string percent(double x) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(1) << 100.0 * x << '%';
  return ss.str();
}

// Collects written files and their checksums for the manifest.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
      throw config_error("cannot create output directory " + dir_.string() +
                         ": " + ec.message());
  }

  void write_text(const std::string& filename, const std::string& text) {
    const auto path = dir_ / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw config_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw config_error("failed to write " + path.string());
    records_.push_back({filename, text.size(), fnv1a64(text.data(), text.size())});
    files_.push_back(path.string());
  }

  void write_csv(const std::string& filename, const csv::Table& table) {
    std::ostringstream ss;
    csv::write(ss, table);
    write_text(filename, ss.str());
  }

  void write_svg(const std::string& filename, const svg::PlotSpec& spec,
                 const std::vector<svg::Series>& series) {
    std::ostringstream ss;
    svg::write_plot(ss, spec, series);
    write_text(filename, ss.str());
  }

  const std::vector<OutputRecord>& records() const { return records_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<OutputRecord> records_;
  std::vector<std::string> files_;
};

// One (label, mode, design, packet) combination ready to evaluate, with any
// variant overrides folded in.
struct ResolvedVariant {
  std::string label;
  SwitchMode mode = SwitchMode::transmission;
  CavityDesign cavity;  // meaningful for shorthand layouts only
  SwitchDesign design;
  WavePacketSpec packet;
};

inline std::vector<ResolvedVariant> resolve_variants(const ScenarioConfig& cfg) {
  std::vector<ResolvedVariant> out;
  const double v_g = cfg.layout.group_velocity_c * speed_of_light;
  const SwitchDesign base_design = design_from_config(cfg.layout);
  auto make = [&](const std::string& label, SwitchMode mode,
                  std::optional<double> g_ghz, std::optional<double> q_c,
                  std::optional<double> fwhm_nm) {
    ResolvedVariant rv;
    rv.label = label;
    rv.mode = mode;
    PacketConfig p = cfg.packet ? *cfg.packet : PacketConfig{1550.0, 1.0};
    if (fwhm_nm) p.fwhm_nm = *fwhm_nm;
    rv.packet = packet_from_config(p);
    if (cfg.layout.shorthand && cfg.layout.cavity) {
      CavityConfig c = *cfg.layout.cavity;
      if (g_ghz) c.g_ghz = *g_ghz;
      if (q_c) c.q_c = *q_c;
      rv.cavity = design_from_cavity(c);
      rv.design = chain_design(rv.cavity, cfg.layout.count,
                               cfg.layout.separation_um.value_or(0.0) * um, v_g);
    } else {
      rv.design = base_design;
      if (!base_design.cavities.empty()) rv.cavity = base_design.cavities.front();
    }
    return rv;
  };
  if (cfg.variants.empty()) {
    out.push_back(make(to_string(cfg.mode), cfg.mode, std::nullopt, std::nullopt,
                       std::nullopt));
  } else {
    for (const auto& v : cfg.variants)
      out.push_back(
          make(v.label, v.mode.value_or(cfg.mode), v.g_ghz, v.q_c, v.fwhm_nm));
  }
  return out;
}

inline double center_wavelength_nm(const ScenarioConfig& cfg) {
  if (cfg.packet) return cfg.packet->center_nm;
  if (cfg.layout.shorthand && cfg.layout.cavity)
    return cfg.layout.cavity->lambda_c_nm;
  if (!cfg.layout.cavities.empty()) {
    double sum = 0.0;
    for (const auto& c : cfg.layout.cavities) sum += c.lambda_c_nm;
    return sum / static_cast<double>(cfg.layout.cavities.size());
  }
  return 1550.0;
}

inline csv::Table spectrum_table(const ScatteringSpectrum& spectrum) {
  csv::Table t;
  t.header = {"wavelength_nm", "transmission", "reflection", "loss",
              "t_real",        "t_imag",       "r_real",     "r_imag"};
  for (const auto& s : spectrum.samples) {
    t.rows.push_back({csv::format_double(s.axis_value),
                      csv::format_double(s.transmission),
                      csv::format_double(s.reflection),
                      csv::format_double(s.loss),
                      csv::format_double(s.t.real()),
                      csv::format_double(s.t.imag()),
                      csv::format_double(s.r.real()),
                      csv::format_double(s.r.imag())});
  }
  return t;
}

inline svg::Series spectrum_series(const ScatteringSpectrum& spectrum,
                                   const std::string& label, bool reflection) {
  svg::Series s;
  s.label = label;
  for (const auto& smp : spectrum.samples) {
    s.x.push_back(smp.axis_value);
    s.y.push_back(reflection ? smp.reflection : smp.transmission);
  }
  return s;
}

inline void run_spectrum(const ScenarioConfig& cfg, const std::string& base,
                         OutputWriter& w, std::ostringstream& console) {
  const auto layout = to_layout(design_from_config(cfg.layout));
  const auto spectrum = compute_spectrum(layout, effective_grid(cfg));
  w.write_csv(base + "_spectrum.csv", spectrum_table(spectrum));

  double min_t = 1.0, min_at = 0.0;
  for (const auto& s : spectrum.samples) {
    if (s.transmission < min_t) {
      min_t = s.transmission;
      min_at = s.axis_value;
    }
  }
  console << "  " << spectrum.samples.size() << " spectral points; minimum "
          << "transmission " << std::fixed << std::setprecision(4) << min_t
          << " at " << std::setprecision(3) << min_at << " nm\n";

  if (cfg.svg) {
    svg::PlotSpec plot;
    plot.title = cfg.name;
    plot.x_label = "wavelength (nm)";
    plot.y_label = "|t|^2, |r|^2";
    w.write_svg(base + ".svg", plot,
                {spectrum_series(spectrum, "transmission", false),
                 spectrum_series(spectrum, "reflection", true)});
  }
}

inline void run_metrics(const ScenarioConfig& cfg, const std::string& base,
                        OutputWriter& w, std::ostringstream& console) {
  const auto variants = resolve_variants(cfg);
  csv::Table t;
  t.header = {"label",         "mode",
              "efficiency",    "fidelity",
              "routing_probability", "quadrature_error_bound",
              "evaluations"};
  for (const auto& rv : variants) {
    const auto layout = to_layout(rv.design);
    const auto ints = packet_integrals(layout, rv.packet);
    const auto m = metrics_from_integrals(ints, rv.mode);
    t.rows.push_back({rv.label, to_string(rv.mode),
                      csv::format_double(m.efficiency),
                      csv::format_double(m.fidelity),
                      csv::format_double(m.routing_probability),
                      csv::format_double(ints.quadrature_error_bound),
                      csv::format_int(static_cast<long long>(ints.evaluations))});
    console << "  " << rv.label << ": efficiency " << percent(m.efficiency)
            << ", fidelity " << percent(m.fidelity) << " ("
            << to_string(rv.mode) << ")\n";
  }
  w.write_csv(base + "_metrics.csv", t);

  // Spectrum over the plotting window with the packet drawn on the same axis.
  const auto layout = to_layout(design_from_config(cfg.layout));
  const auto spectrum = compute_spectrum(layout, effective_grid(cfg));
  const auto packet = packet_from_config(*cfg.packet);
  const double peak =
      envelope_intensity(packet, packet_omega_center(packet));
  csv::Table st = spectrum_table(spectrum);
  st.header.push_back("packet_intensity");
  for (std::size_t i = 0; i < st.rows.size(); ++i) {
    const double value =
        envelope_intensity(packet, spectrum.samples[i].omega) / peak;
    st.rows[i].push_back(csv::format_double(value));
  }
  w.write_csv(base + "_spectrum.csv", st);

  if (cfg.svg) {
    svg::Series pk;
    pk.label = "packet (normalised)";
    for (const auto& s : spectrum.samples) {
      pk.x.push_back(s.axis_value);
      pk.y.push_back(envelope_intensity(packet, s.omega) / peak);
    }
    svg::PlotSpec plot;
    plot.title = cfg.name;
    plot.x_label = "wavelength (nm)";
    plot.y_label = "|t|^2, |r|^2, packet";
    w.write_svg(base + ".svg", plot,
                {spectrum_series(spectrum, "transmission", false),
                 spectrum_series(spectrum, "reflection", true), pk});
  }
}

inline void run_sweep(const ScenarioConfig& cfg, const std::string& base,
                      OutputWriter& w, std::ostringstream& console) {
  const auto variants = resolve_variants(cfg);
  const double v_g = cfg.layout.group_velocity_c * speed_of_light;
  const double separation = cfg.layout.separation_um.value_or(0.0) * um;

  std::string x_name;
  std::vector<std::vector<SweepRow>> per_variant(variants.size());
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const SweepVariant sv{variants[i].label,
                          params_from_design(variants[i].cavity),
                          variants[i].mode};
    switch (cfg.experiment) {
      case ExperimentKind::sweep_d:
        x_name = "separation_um";
        per_variant[i] = sweep_separations(
            {sv}, cfg.layout.count, cfg.sweep_d->start_um, cfg.sweep_d->stop_um,
            cfg.sweep_d->step_um, v_g, variants[i].packet);
        break;
      case ExperimentKind::sweep_g:
        x_name = "coupling_ghz";
        per_variant[i] = sweep_coupling({sv}, cfg.sweep_g->values_ghz,
                                        cfg.layout.count, separation, v_g,
                                        variants[i].packet);
        break;
      default:
        x_name = "cavity_count";
        per_variant[i] =
            sweep_cavity_count({sv}, cfg.sweep_n->min_count,
                               cfg.sweep_n->max_count, separation, v_g,
                               variants[i].packet);
        break;
    }
  }

  csv::Table t;
  t.header.push_back(x_name);
  for (const auto& rv : variants) {
    t.header.push_back("efficiency_" + rv.label);
    t.header.push_back("fidelity_" + rv.label);
    t.header.push_back("probability_" + rv.label);
  }
  const std::size_t n_rows = per_variant.front().size();
  std::size_t failed = 0;
  for (std::size_t k = 0; k < n_rows; ++k) {
    std::vector<std::string> row;
    row.push_back(csv::format_double(per_variant.front()[k].x));
    for (std::size_t i = 0; i < variants.size(); ++i) {
      const SweepCell& cell = per_variant[i][k].cells.front();
      if (cell.ok) {
        row.push_back(csv::format_double(cell.efficiency));
        row.push_back(csv::format_double(cell.fidelity));
        row.push_back(csv::format_double(cell.routing_probability));
      } else {
        ++failed;
        row.insert(row.end(), {"", "", ""});
      }
    }
    t.rows.push_back(std::move(row));
  }
  w.write_csv(base + "_sweep.csv", t);

  console << "  " << n_rows << " sweep points x " << variants.size()
          << " variant" << (variants.size() == 1 ? "" : "s");
  if (failed > 0) console << "; " << failed << " cells failed";
  console << "\n";

  if (cfg.svg) {
    std::vector<svg::Series> series;
    for (std::size_t i = 0; i < variants.size(); ++i) {
      svg::Series eff, fid;
      eff.label = "E " + variants[i].label;
      fid.label = "F " + variants[i].label;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      for (const auto& r : per_variant[i]) {
        const SweepCell& cell = r.cells.front();
        eff.x.push_back(r.x);
        fid.x.push_back(r.x);
        eff.y.push_back(cell.ok ? cell.efficiency : nan);
        fid.y.push_back(cell.ok ? cell.fidelity : nan);
      }
      series.push_back(std::move(eff));
      series.push_back(std::move(fid));
    }
    svg::PlotSpec plot;
    plot.title = cfg.name;
    plot.y_label = "efficiency, fidelity";
    if (cfg.experiment == ExperimentKind::sweep_d)
      plot.x_label = "separation (um)";
    else if (cfg.experiment == ExperimentKind::sweep_g)
      plot.x_label = "g/2pi (GHz)";
    else
      plot.x_label = "number of cavities";
    if (cfg.experiment == ExperimentKind::sweep_g) {
      bool positive = true;
      for (double x : cfg.sweep_g->values_ghz) positive = positive && x > 0.0;
      plot.log_x = positive;
    }
    w.write_svg(base + ".svg", plot, series);
  }
}

inline void run_disorder(const ScenarioConfig& cfg, const std::string& base,
                         OutputWriter& w, std::ostringstream& console) {
  const SwitchDesign design = design_from_config(cfg.layout);
  const auto grid = effective_grid(cfg);
  const DisorderSpec spec = disorder_from_config(*cfg.disorder, cfg.seed);
  const auto result = disorder_study(design, spec, grid);
  const auto ideal = compute_spectrum(to_layout(design), grid);

  csv::Table t;
  t.header = {"wavelength_nm",     "transmission_ideal", "transmission_mean",
              "reflection_mean",   "loss_mean",          "transmission_coherent",
              "reflection_coherent"};
  for (std::size_t s = 0; s < result.samples.size(); ++s)
    t.header.push_back("transmission_sample_" + std::to_string(s + 1));
  for (std::size_t i = 0; i < result.mean.samples.size(); ++i) {
    const auto& m = result.mean.samples[i];
    std::vector<std::string> row = {
        csv::format_double(m.axis_value),
        csv::format_double(ideal.samples[i].transmission),
        csv::format_double(m.transmission),
        csv::format_double(m.reflection),
        csv::format_double(m.loss),
        csv::format_double(std::norm(m.t)),
        csv::format_double(std::norm(m.r))};
    for (const auto& sample : result.samples)
      row.push_back(csv::format_double(sample.samples[i].transmission));
    t.rows.push_back(std::move(row));
  }
  w.write_csv(base + "_disorder.csv", t);

  // Per-realization parameter draws in the same units as the config.
  const double unit = (spec.target == DisorderTarget::coupled_q) ? 1.0
                      : (spec.target == DisorderTarget::separation) ? um
                                                                    : nm;
  csv::Table draws;
  draws.header = {"realization", "slot", "value"};
  for (std::size_t rz = 0; rz < result.draws.size(); ++rz) {
    for (std::size_t slot = 0; slot < result.draws[rz].size(); ++slot) {
      draws.rows.push_back({csv::format_int(static_cast<long long>(rz)),
                            csv::format_int(static_cast<long long>(slot)),
                            csv::format_double(result.draws[rz][slot] / unit)});
    }
  }
  w.write_csv(base + "_draws.csv", draws);

  const double dev = rms_transmission_deviation(result.mean, ideal);
  console << "  " << result.realizations << " realizations of "
          << to_string(spec.target) << " disorder; rms transmission deviation "
          << "from ideal " << std::scientific << std::setprecision(3) << dev
          << "\n";

  if (cfg.svg) {
    std::vector<svg::Series> series = {
        spectrum_series(ideal, "ideal", false),
        spectrum_series(result.mean, "average", false)};
    for (std::size_t s = 0; s < result.samples.size(); ++s)
      series.push_back(spectrum_series(result.samples[s],
                                       "sample " + std::to_string(s + 1),
                                       false));
    svg::PlotSpec plot;
    plot.title = cfg.name;
    plot.x_label = "wavelength (nm)";
    plot.y_label = "|t|^2";
    w.write_svg(base + ".svg", plot, series);
  }
}

inline void run_mitigation(const ScenarioConfig& cfg, const std::string& base,
                           OutputWriter& w, std::ostringstream& console) {
  const auto ideal_layout = to_layout(design_from_config(cfg.layout));
  const auto grid = effective_grid(cfg);
  const int index = cfg.mitigation->cavity_number - 1;

  std::vector<std::pair<std::string, ScatteringSpectrum>> stages;
  stages.emplace_back("ideal", compute_spectrum(ideal_layout, grid));
  SwitchLayout current = ideal_layout;
  std::vector<SwitchLayout> stage_layouts = {ideal_layout};
  int stage_no = 1;
  for (const auto& a : cfg.mitigation->actions) {
    current = apply_mitigation(current, index, action_from_config(a));
    const char* token = a.kind == MitigationAction::Kind::weak_g ? "weak_g"
                        : a.kind == MitigationAction::Kind::detune_to
                            ? "detune_to"
                            : "decouple";
    stages.emplace_back(std::to_string(stage_no) + "_" + token,
                        compute_spectrum(current, grid));
    stage_layouts.push_back(current);
    ++stage_no;
  }

  csv::Table t;
  t.header.push_back("wavelength_nm");
  for (const auto& [label, spectrum] : stages) {
    t.header.push_back("transmission_" + label);
    t.header.push_back("reflection_" + label);
  }
  const std::size_t pts = stages.front().second.samples.size();
  for (std::size_t i = 0; i < pts; ++i) {
    std::vector<std::string> row = {
        csv::format_double(stages.front().second.samples[i].axis_value)};
    for (const auto& [label, spectrum] : stages) {
      row.push_back(csv::format_double(spectrum.samples[i].transmission));
      row.push_back(csv::format_double(spectrum.samples[i].reflection));
    }
    t.rows.push_back(std::move(row));
  }
  w.write_csv(base + "_mitigation.csv", t);

  const double omega0 = wavelength_to_omega(center_wavelength_nm(cfg) * nm);
  console << "  transmission at " << std::fixed << std::setprecision(1)
          << center_wavelength_nm(cfg) << " nm:";
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto amps = scattering(stage_layouts[s], omega0);
    console << (s == 0 ? " " : ", ") << stages[s].first << " "
            << std::setprecision(3) << std::norm(amps.t);
  }
  console << "\n";

  if (cfg.svg) {
    std::vector<svg::Series> series;
    for (const auto& [label, spectrum] : stages)
      series.push_back(spectrum_series(spectrum, label, false));
    svg::PlotSpec plot;
    plot.title = cfg.name;
    plot.x_label = "wavelength (nm)";
    plot.y_label = "|t|^2";
    w.write_svg(base + ".svg", plot, series);
  }
}

}  // namespace detail

inline RunResult run_scenario(const ScenarioConfig& cfg_in,
                              const std::filesystem::path& out_dir,
                              std::optional<std::uint64_t> seed_override =
                                  std::nullopt) {
  ScenarioConfig cfg = cfg_in;
  if (seed_override) cfg.seed = *seed_override;
  validate_config(cfg);

  const auto t0 = std::chrono::steady_clock::now();
  detail::OutputWriter writer(out_dir);
  const std::string base =
      detail::sanitize_name(cfg.name.empty() ? "run" : cfg.name);
  std::ostringstream console;
  console << (cfg.name.empty() ? base : cfg.name);
  if (!cfg.description.empty()) console << ": " << cfg.description;
  console << "\n";

  switch (cfg.experiment) {
    case ExperimentKind::spectrum:
      detail::run_spectrum(cfg, base, writer, console);
      break;
    case ExperimentKind::metrics:
      detail::run_metrics(cfg, base, writer, console);
      break;
    case ExperimentKind::sweep_d:
    case ExperimentKind::sweep_g:
    case ExperimentKind::sweep_n:
      detail::run_sweep(cfg, base, writer, console);
      break;
    case ExperimentKind::disorder:
      detail::run_disorder(cfg, base, writer, console);
      break;
    case ExperimentKind::mitigation:
      detail::run_mitigation(cfg, base, writer, console);
      break;
  }

  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  RunManifest manifest;
  manifest.name = cfg.name.empty() ? base : cfg.name;
  manifest.experiment = to_string(cfg.experiment);
  manifest.seed = cfg.seed;
  manifest.wall_ms = wall_ms;
  manifest.config = config_to_json(cfg);
  manifest.outputs = writer.records();
  writer.write_text(base + "_manifest.json",
                    manifest_to_json(manifest).dump(2) + "\n");

  RunResult result;
  result.name = manifest.name;
  result.experiment = cfg.experiment;
  result.seed = cfg.seed;
  result.wall_ms = wall_ms;
  result.files = writer.files();
  result.console = console.str();
  return result;
}

}  // namespace pswitch
