#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pswitch/config.hpp"

namespace pswitch {

// A bundled, ready-to-run configuration. json_text is the exact text written
// by `simulate scenarios --dump` and shipped in the scenarios/ directory.
struct Scenario {
  std::string name;
  std::string summary;
  std::string json_text;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson scn_cavity(double g_ghz, double q_c) {
  ojson c;
  c["lambda_c_nm"] = 1550.0;
  c["g_ghz"] = g_ghz;
  c["q_c"] = q_c;
  c["q_u"] = 50000.0;
  c["gamma_ghz"] = 1.0;
  return c;
}

inline ojson scn_layout(double g_ghz, int count, double separation_um,
                        double q_c = 500.0) {
  ojson l;
  l["cavity"] = scn_cavity(g_ghz, q_c);
  l["count"] = count;
  if (count > 1) l["separation_um"] = separation_um;
  l["group_velocity_c"] = 0.3;
  return l;
}

inline ojson scn_grid(double start_nm, double stop_nm, int points) {
  ojson g;
  g["start_nm"] = start_nm;
  g["stop_nm"] = stop_nm;
  g["points"] = points;
  return g;
}

inline ojson scn_packet(double fwhm_nm) {
  ojson p;
  p["center_nm"] = 1550.0;
  p["fwhm_nm"] = fwhm_nm;
  return p;
}

inline Scenario scn_finish(const std::string& name, const std::string& summary,
                           ojson body) {
  ojson j;
  j["name"] = name;
  j["description"] = summary;
  for (auto& [key, value] : body.items()) j[key] = value;
  return {name, summary, j.dump(2) + "\n"};
}

inline Scenario scn_chain_spectrum(const std::string& name,
                                   const std::string& summary, double g_ghz,
                                   int count, double separation_um,
                                   const ojson& grid) {
  ojson j;
  j["experiment"] = "spectrum";
  j["layout"] = scn_layout(g_ghz, count, separation_um);
  j["grid"] = grid;
  return scn_finish(name, summary, j);
}

inline Scenario scn_metrics(const std::string& name, const std::string& summary,
                            double g_ghz, int count, double separation_um,
                            const ojson& grid, double fwhm_nm,
                            const char* mode) {
  ojson j;
  j["experiment"] = "metrics";
  j["layout"] = scn_layout(g_ghz, count, separation_um);
  j["grid"] = grid;
  j["packet"] = scn_packet(fwhm_nm);
  j["mode"] = mode;
  return scn_finish(name, summary, j);
}

inline Scenario scn_disorder(const std::string& name, const std::string& summary,
                             double g_ghz, const char* target, double mean,
                             double sigma, std::uint64_t seed) {
  ojson j;
  j["experiment"] = "disorder";
  j["layout"] = scn_layout(g_ghz, 10, 31.5);
  j["grid"] = scn_grid(1535.0, 1565.0, 1501);
  ojson d;
  d["target"] = target;
  d["mean"] = mean;
  d["sigma"] = sigma;
  d["realizations"] = 1000;
  j["disorder"] = d;
  j["seed"] = seed;
  return scn_finish(name, summary, j);
}

inline std::vector<Scenario> build_scenario_catalog() {
  std::vector<Scenario> entries;
  const ojson wide = scn_grid(1520.0, 1580.0, 3001);
  const ojson narrow = scn_grid(1540.0, 1560.0, 2001);

  // Weak-coupling transmission spectra for growing cavity counts: the
  // resonance dip broadens and waveguide interference fringes appear.
  entries.push_back(scn_chain_spectrum(
      "fig2a", "weak-coupling transmission spectrum, one cavity", 0.1, 1, 31.5,
      wide));
  entries.push_back(scn_chain_spectrum(
      "fig2b", "weak-coupling transmission spectrum, three cavities", 0.1, 3,
      31.5, wide));
  entries.push_back(scn_chain_spectrum(
      "fig2c", "weak-coupling transmission spectrum, five cavities", 0.1, 5,
      31.5, wide));
  entries.push_back(scn_chain_spectrum(
      "fig2d", "weak-coupling transmission spectrum, ten cavities", 0.1, 10,
      31.5, wide));

  // Single-cavity switch principle: dip in the weak regime, Rabi-split
  // transmission window in the strong regime.
  entries.push_back(scn_chain_spectrum(
      "fig3a", "single cavity, weak coupling: transmission dip on resonance",
      0.1, 1, 31.5, narrow));
  entries.push_back(scn_chain_spectrum(
      "fig3b", "single cavity, strong coupling: Rabi-split transmission window",
      100.0, 1, 31.5, narrow));

  // Wave-packet switching examples with efficiency/fidelity metrics.
  entries.push_back(scn_metrics(
      "fig4a", "reflect a 0.01 nm FWHM packet with one weakly coupled cavity",
      0.1, 1, 31.5, scn_grid(1545.0, 1555.0, 2001), 0.01, "reflection"));
  entries.push_back(scn_metrics(
      "fig4b", "transmit a 0.01 nm FWHM packet with one strongly coupled cavity",
      100.0, 1, 31.5, scn_grid(1545.0, 1555.0, 2001), 0.01, "transmission"));
  entries.push_back(scn_metrics(
      "fig4c", "reflect a 1 nm FWHM packet with three weakly coupled cavities",
      0.1, 3, 4.65, narrow, 1.0, "reflection"));
  entries.push_back(scn_metrics(
      "fig4d", "transmit a 1 nm FWHM packet with three strongly coupled cavities",
      500.0, 3, 4.65, scn_grid(1535.0, 1565.0, 3001), 1.0, "transmission"));

  // Separation sweep for the three-cavity switch, both operating modes.
  {
    ojson j;
    j["experiment"] = "sweep-d";
    j["layout"] = scn_layout(0.1, 3, 4.65);
    j["packet"] = scn_packet(1.0);
    j["variants"] = ojson::array();
    ojson v1;
    v1["label"] = "reflection";
    v1["mode"] = "reflection";
    j["variants"].push_back(v1);
    ojson v2;
    v2["label"] = "transmission";
    v2["mode"] = "transmission";
    v2["g_ghz"] = 500.0;
    j["variants"].push_back(v2);
    ojson s;
    s["start_um"] = 1.0;
    s["stop_um"] = 100.0;
    s["step_um"] = 0.01;
    j["sweep"] = s;
    entries.push_back(scn_finish(
        "fig5",
        "efficiency and fidelity of the three-cavity switch vs cavity "
        "separation",
        j));
  }

  // Coupling-rate sweep in transmission mode: two coupled-Q factors, two
  // packet widths.
  {
    ojson j;
    j["experiment"] = "sweep-g";
    j["layout"] = scn_layout(0.1, 3, 4.65);
    j["packet"] = scn_packet(1.0);
    j["mode"] = "transmission";
    j["variants"] = ojson::array();
    const struct {
      const char* label;
      double q_c;
      double fwhm;
    } cases[] = {{"Qc500-fwhm0p01nm", 500.0, 0.01},
                 {"Qc500-fwhm1nm", 500.0, 1.0},
                 {"Qc2000-fwhm0p01nm", 2000.0, 0.01},
                 {"Qc2000-fwhm1nm", 2000.0, 1.0}};
    for (const auto& c : cases) {
      ojson v;
      v["label"] = c.label;
      if (c.q_c != 500.0) v["q_c"] = c.q_c;
      v["fwhm_nm"] = c.fwhm;
      j["variants"].push_back(v);
    }
    ojson s;
    s["start_ghz"] = 1.0;
    s["stop_ghz"] = 1000.0;
    s["points"] = 61;
    s["spacing"] = "log";
    j["sweep"] = s;
    entries.push_back(scn_finish(
        "fig6",
        "transmission efficiency and fidelity vs emitter-cavity coupling rate",
        j));
  }

  // Cavity-count sweep: reflection in the weak regime, transmission in the
  // strong regime at two coupled-Q factors.
  {
    ojson j;
    j["experiment"] = "sweep-n";
    j["layout"] = scn_layout(0.1, 3, 4.65);
    j["packet"] = scn_packet(1.0);
    j["variants"] = ojson::array();
    ojson v1;
    v1["label"] = "weak-reflection";
    v1["mode"] = "reflection";
    j["variants"].push_back(v1);
    ojson v2;
    v2["label"] = "strong-Qc500";
    v2["mode"] = "transmission";
    v2["g_ghz"] = 500.0;
    j["variants"].push_back(v2);
    ojson v3;
    v3["label"] = "strong-Qc2000";
    v3["mode"] = "transmission";
    v3["g_ghz"] = 500.0;
    v3["q_c"] = 2000.0;
    j["variants"].push_back(v3);
    ojson s;
    s["min_count"] = 1;
    s["max_count"] = 5;
    j["sweep"] = s;
    entries.push_back(scn_finish(
        "fig7", "switch efficiency and fidelity vs number of cavities", j));
  }

  // Ideal ten-cavity spectra that the disorder studies perturb.
  entries.push_back(scn_chain_spectrum(
      "appE-ideal-weak", "ideal ten-cavity spectrum, weak coupling", 0.1, 10,
      31.5, scn_grid(1535.0, 1565.0, 3001)));
  entries.push_back(scn_chain_spectrum(
      "appE-ideal-strong", "ideal ten-cavity spectrum, strong coupling", 1000.0,
      10, 31.5, scn_grid(1535.0, 1565.0, 3001)));

  // Seeded Monte Carlo disorder studies on the ten-cavity switch.
  std::uint64_t seed = 101;
  const struct {
    const char* tag;
    const char* what;
    const char* target;
    double mean;
    double sigma;
    const char* sigma_tag;   // filename-friendly
    const char* sigma_text;  // human-readable
  } families[] = {
      {"cavity", "cavity wavelengths", "cavity_wavelength", 1550.0, 1.0, "1nm",
       "1 nm"},
      {"cavity", "cavity wavelengths", "cavity_wavelength", 1550.0, 5.0, "5nm",
       "5 nm"},
      {"emitter-tuned", "cavity wavelengths with emitters tuned to follow",
       "emitter_follows_cavity", 1550.0, 1.0, "1nm", "1 nm"},
      {"emitter-tuned", "cavity wavelengths with emitters tuned to follow",
       "emitter_follows_cavity", 1550.0, 5.0, "5nm", "5 nm"},
      {"q", "coupled-Q factors", "coupled_q", 500.0, 50.0, "50", "50"},
      {"q", "coupled-Q factors", "coupled_q", 500.0, 125.0, "125", "125"},
      {"separation", "cavity separations", "separation", 31.5, 0.01, "10nm",
       "10 nm"},
      {"separation", "cavity separations", "separation", 31.5, 1.0, "1um",
       "1 um"},
  };
  for (const auto& f : families) {
    for (double g_ghz : {0.1, 1000.0}) {
      const char* regime = (g_ghz < 1.0) ? "weak" : "strong";
      const std::string name = std::string("appE-") + f.tag + "-sigma" +
                               f.sigma_tag + "-" + regime;
      const std::string summary = std::string("ten-cavity ") + regime +
                                  "-coupling spectrum with disordered " +
                                  f.what + " (sigma " + f.sigma_text + ")";
      entries.push_back(
          scn_disorder(name, summary, g_ghz, f.target, f.mean, f.sigma, seed));
      ++seed;
    }
  }

  // Mitigation of one weakly coupled cavity in the strong-coupling switch:
  // stage the failure, then detune the bad cavity, then decouple it.
  {
    ojson j;
    j["experiment"] = "mitigation";
    j["layout"] = scn_layout(1000.0, 10, 31.5);
    j["grid"] = scn_grid(1535.0, 1565.0, 3001);
    ojson m;
    m["cavity_number"] = 7;
    m["actions"] = ojson::array();
    ojson a1;
    a1["action"] = "weak_g";
    a1["g_ghz"] = 0.1;
    m["actions"].push_back(a1);
    ojson a2;
    a2["action"] = "detune_to";
    a2["lambda_nm"] = 1543.0;
    m["actions"].push_back(a2);
    ojson a3;
    a3["action"] = "decouple";
    m["actions"].push_back(a3);
    j["mitigation"] = m;
    entries.push_back(scn_finish(
        "appE-mitigation",
        "recover the transmission window when one cavity stays weakly coupled",
        j));
  }

  return entries;
}

}  // namespace detail

inline const std::vector<Scenario>& scenario_catalog() {
  static const std::vector<Scenario> entries = detail::build_scenario_catalog();
  return entries;
}

inline const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : scenario_catalog()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace pswitch
