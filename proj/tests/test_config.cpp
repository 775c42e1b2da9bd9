#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pswitch/config.hpp"
#include "pswitch/csv.hpp"
#include "pswitch/run.hpp"
#include "pswitch/scenarios.hpp"

namespace {

using namespace pswitch;
namespace fs = std::filesystem;

ScenarioConfig parse(const std::string& text) { return parse_config_text(text); }

const char* kMinimalSpectrum = R"({
  "experiment": "spectrum",
  "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500}}
})";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path unique_temp_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = fs::temp_directory_path() /
                   ("pswitch_cfg_" + tag + "_" + std::to_string(++counter));
  fs::remove_all(dir);
  return dir;
}

TEST(Parse, MinimalSpectrumGetsDefaults) {
  const auto cfg = parse(kMinimalSpectrum);
  EXPECT_EQ(cfg.experiment, ExperimentKind::spectrum);
  ASSERT_TRUE(cfg.layout.shorthand);
  EXPECT_EQ(cfg.layout.count, 1);
  ASSERT_TRUE(cfg.layout.cavity.has_value());
  EXPECT_EQ(cfg.layout.cavity->lambda_e_nm, 1550.0);  // follows lambda_c
  EXPECT_EQ(cfg.layout.cavity->g_ghz, 0.0);
  EXPECT_TRUE(std::isinf(cfg.layout.cavity->q_u));  // absent = lossless
  EXPECT_EQ(cfg.layout.group_velocity_c, 1.0);
  EXPECT_EQ(cfg.mode, SwitchMode::transmission);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_TRUE(cfg.svg);

  const auto grid = effective_grid(cfg);
  EXPECT_EQ(grid.start, 1545.0);
  EXPECT_EQ(grid.stop, 1555.0);
  EXPECT_EQ(grid.points, 2001);
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(Parse, UnknownKeysRejectedAtEveryLevel) {
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"bogus":1})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500},"bogus":1}})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500,"bogus":1}}})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"grid":{"start_nm":1,"stop_nm":2,"points":3,"bogus":4}})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"metrics","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"packet":{"center_nm":1550,"fwhm_nm":1,"bogus":0}})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"mitigation","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"mitigation":{"cavity_number":1,"actions":[{"action":"decouple","bogus":1}]}})"),
               config_error);
}

TEST(Parse, StructuralProblemsAreConfigErrors) {
  EXPECT_THROW(parse("this is not json"), config_error);
  EXPECT_THROW(parse("[1,2,3]"), config_error);
  EXPECT_THROW(parse(R"({"layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}}})"),
               config_error);  // missing experiment
  EXPECT_THROW(parse(R"({"experiment":"spectrum"})"), config_error);
  EXPECT_THROW(parse(R"({"experiment":"warp","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}}})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"q_c":500}}})"),
               config_error);  // lambda_c_nm required
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500},"count":3}})"),
               config_error);  // separation_um required for count > 1
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"grid":{"start_nm":1,"stop_nm":2,"points":"many"}})"),
               config_error);  // wrong type
  EXPECT_THROW(parse(R"({"experiment":"metrics","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}}})"),
               config_error);  // metrics needs a packet
  EXPECT_THROW(parse(R"({"experiment":"sweep-d","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"packet":{"center_nm":1550,"fwhm_nm":1}})"),
               config_error);  // sweep experiments need a sweep section
  EXPECT_THROW(parse(R"({"experiment":"disorder","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}}})"),
               config_error);
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"disorder":{"target":"coupled_q","mean":500,"sigma":50,"realizations":4}})"),
               config_error);  // disorder section on the wrong experiment
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"mode":"sideways"})"),
               config_error);
}

TEST(Parse, UnphysicalValuesAreValidationErrors) {
  auto cfg = parse(kMinimalSpectrum);
  cfg.layout.cavity->q_c = -2.0;
  EXPECT_THROW(validate_config(cfg), validation_error);

  auto grid_cfg = parse(R"({"experiment":"spectrum","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"grid":{"start_nm":1560,"stop_nm":1540,"points":11}})");
  EXPECT_THROW(validate_config(grid_cfg), validation_error);

  auto packet_cfg = parse(R"({"experiment":"metrics","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"packet":{"center_nm":1550,"fwhm_nm":-1}})");
  EXPECT_THROW(validate_config(packet_cfg), validation_error);

  auto mit_cfg = parse(R"({"experiment":"mitigation","layout":{"cavity":{"lambda_c_nm":1550,"q_c":500}},"mitigation":{"cavity_number":4,"actions":[{"action":"decouple"}]}})");
  EXPECT_THROW(validate_config(mit_cfg), validation_error);  // only 1 cavity
}

TEST(Parse, ExplicitLayoutForm) {
  const auto cfg = parse(R"({
    "experiment": "spectrum",
    "layout": {
      "cavities": [
        {"lambda_c_nm": 1549, "q_c": 500},
        {"lambda_c_nm": 1551, "q_c": 800, "q_u": 10000}
      ],
      "links_um": [10.5],
      "group_velocity_c": 0.3
    }
  })");
  EXPECT_FALSE(cfg.layout.shorthand);
  ASSERT_EQ(cfg.layout.cavities.size(), 2u);
  EXPECT_EQ(cfg.layout.cavities[1].q_u, 10000.0);
  const auto design = design_from_config(cfg.layout);
  ASSERT_EQ(design.separations.size(), 1u);
  EXPECT_NEAR(design.separations[0], 10.5e-6, 1e-18);
  EXPECT_NO_THROW(validate_config(cfg));

  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavities":[{"lambda_c_nm":1550,"q_c":500}],"links_um":[5]}})"),
               config_error);  // one cavity needs zero links
  EXPECT_THROW(parse(R"({"experiment":"spectrum","layout":{"cavities":[{"lambda_c_nm":1550,"q_c":500}],"cavity":{"lambda_c_nm":1550,"q_c":500}}})"),
               config_error);  // both forms at once
}

TEST(Parse, VariantRules) {
  const char* base = R"({
    "experiment": "metrics",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "g_ghz": 0.1,
                          "gamma_ghz": 1, "q_u": 50000},
               "count": 3, "separation_um": 4.65},
    "packet": {"center_nm": 1550, "fwhm_nm": 1},
    "variants": [
      {"label": "a", "mode": "reflection"},
      {"label": "b", "g_ghz": 500, "fwhm_nm": 0.01}
    ]
  })";
  const auto cfg = parse(base);
  ASSERT_EQ(cfg.variants.size(), 2u);
  EXPECT_EQ(*cfg.variants[0].mode, SwitchMode::reflection);
  EXPECT_FALSE(cfg.variants[1].mode.has_value());
  EXPECT_EQ(*cfg.variants[1].g_ghz, 500.0);
  EXPECT_NO_THROW(validate_config(cfg));

  std::string dup = base;
  const auto pos = dup.find("\"label\": \"b\"");
  dup.replace(pos, 12, "\"label\": \"a\"");
  EXPECT_THROW(parse(dup), config_error);

  EXPECT_THROW(parse(R"({
    "experiment": "metrics",
    "layout": {"cavities": [{"lambda_c_nm": 1550, "q_c": 500}]},
    "packet": {"center_nm": 1550, "fwhm_nm": 1},
    "variants": [{"label": "a", "g_ghz": 500}]
  })"),
               config_error);  // cavity overrides need the shorthand layout
}

TEST(Parse, SweepSpecForms) {
  const auto lin = parse(R"({
    "experiment": "sweep-g",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "gamma_ghz": 1},
               "count": 1},
    "packet": {"center_nm": 1550, "fwhm_nm": 1},
    "sweep": {"start_ghz": 0, "stop_ghz": 10, "points": 3}
  })");
  ASSERT_TRUE(lin.sweep_g.has_value());
  EXPECT_EQ(lin.sweep_g->values_ghz, (std::vector<double>{0.0, 5.0, 10.0}));

  const auto log = parse(R"({
    "experiment": "sweep-g",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "gamma_ghz": 1},
               "count": 1},
    "packet": {"center_nm": 1550, "fwhm_nm": 1},
    "sweep": {"start_ghz": 1, "stop_ghz": 1000, "points": 4, "spacing": "log"}
  })");
  const auto& xs = log.sweep_g->values_ghz;
  ASSERT_EQ(xs.size(), 4u);
  EXPECT_EQ(xs.front(), 1.0);
  EXPECT_EQ(xs.back(), 1000.0);
  EXPECT_NEAR(xs[1], 10.0, 1e-9);
  EXPECT_NEAR(xs[2], 100.0, 1e-9);

  const auto literal = parse(R"({
    "experiment": "sweep-g",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "gamma_ghz": 1},
               "count": 1},
    "packet": {"center_nm": 1550, "fwhm_nm": 1},
    "sweep": {"values_ghz": [2, 4, 8]}
  })");
  EXPECT_EQ(literal.sweep_g->values_ghz, (std::vector<double>{2.0, 4.0, 8.0}));

  EXPECT_THROW(parse(R"({
    "experiment": "sweep-g",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "gamma_ghz": 1},
               "count": 1},
    "packet": {"center_nm": 1550, "fwhm_nm": 1},
    "sweep": {"start_ghz": 0, "stop_ghz": 10, "points": 3, "spacing": "log"}
  })"),
               config_error);  // log spacing needs a positive start
}

TEST(Parse, EmptyLayoutIsAllowed) {
  const auto cfg = parse(R"({"experiment":"spectrum","layout":{"count":0},
                             "grid":{"start_nm":1540,"stop_nm":1560,"points":5}})");
  EXPECT_EQ(cfg.layout.count, 0);
  EXPECT_FALSE(cfg.layout.cavity.has_value());
  const auto design = design_from_config(cfg.layout);
  EXPECT_TRUE(design.cavities.empty());
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(RoundTrip, EmitParseEmitIsAFixedPoint) {
  for (const auto& scenario : scenario_catalog()) {
    const auto cfg = parse(scenario.json_text);
    const nlohmann::json emitted = config_to_json(cfg);
    const auto cfg2 = config_from_json(emitted);
    EXPECT_EQ(config_to_json(cfg2), emitted) << scenario.name;
  }
}

TEST(Override, DottedPathsAndTypes) {
  nlohmann::json root = nlohmann::json::parse(kMinimalSpectrum);
  apply_override(root, "layout.cavity.g_ghz=500");
  apply_override(root, "layout.count=3");
  apply_override(root, "layout.separation_um=4.65");
  apply_override(root, "name=demo run");
  apply_override(root, "layout.cavity.gamma_ghz=1");
  const auto cfg = config_from_json(root);
  EXPECT_EQ(cfg.layout.cavity->g_ghz, 500.0);
  EXPECT_EQ(cfg.layout.count, 3);
  EXPECT_EQ(cfg.name, "demo run");  // unquoted strings pass through

  // creates intermediate objects on demand
  apply_override(root, "packet.center_nm=1550");
  apply_override(root, "packet.fwhm_nm=1");
  EXPECT_EQ(root.at("packet").at("fwhm_nm"), 1.0);

  // array indices
  nlohmann::json arr = {{"variants", {{{"label", "a"}}, {{"label", "b"}}}}};
  apply_override(arr, "variants.1.fwhm_nm=0.5");
  EXPECT_EQ(arr["variants"][1]["fwhm_nm"], 0.5);
  EXPECT_THROW(apply_override(arr, "variants.7.fwhm_nm=0.5"), config_error);

  EXPECT_THROW(apply_override(root, "no-equals-sign"), config_error);
  EXPECT_THROW(apply_override(root, "=5"), config_error);
  EXPECT_THROW(apply_override(root, "a..b=5"), config_error);
  EXPECT_THROW(apply_override(root, "name.sub=5"), config_error);  // non-object
}

TEST(Catalog, EntriesAreUniqueParseableAndValid) {
  const auto& catalog = scenario_catalog();
  ASSERT_FALSE(catalog.empty());
  std::set<std::string> names;
  for (const auto& s : catalog) {
    EXPECT_TRUE(names.insert(s.name).second) << "duplicate " << s.name;
    const auto cfg = parse(s.json_text);
    EXPECT_EQ(cfg.name, s.name);
    EXPECT_NO_THROW(validate_config(cfg)) << s.name;
    EXPECT_EQ(find_scenario(s.name), &s);
  }
  for (const char* required :
       {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4a", "fig4b",
        "fig4c", "fig4d", "fig5", "fig6", "fig7", "appE-ideal-weak",
        "appE-ideal-strong", "appE-mitigation"}) {
    EXPECT_NE(find_scenario(required), nullptr) << required;
  }
  EXPECT_EQ(find_scenario("no-such-scenario"), nullptr);
}

TEST(Catalog, CheckedInFilesMatchTheBinary) {
  const fs::path dir = fs::path(PSWITCH_SOURCE_DIR) / "scenarios";
  ASSERT_TRUE(fs::is_directory(dir));
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, scenario_catalog().size());
  for (const auto& s : scenario_catalog()) {
    const auto path = dir / (s.name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(read_file(path), s.json_text) << s.name;
  }
}

TEST(Run, SpectrumArtifactsAndManifestChecksums) {
  const auto dir = unique_temp_dir("spectrum");
  auto cfg = parse(R"({
    "name": "probe",
    "experiment": "spectrum",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "q_u": 50000}},
    "grid": {"start_nm": 1545, "stop_nm": 1555, "points": 51}
  })");
  const auto result = run_scenario(cfg, dir);
  ASSERT_EQ(result.files.size(), 3u);  // csv, svg, manifest

  std::ifstream csv_in(dir / "probe_spectrum.csv");
  const csv::Table table = csv::read(csv_in);
  EXPECT_EQ(table.header.front(), "wavelength_nm");
  EXPECT_EQ(table.rows.size(), 51u);

  const auto manifest = nlohmann::json::parse(read_file(dir / "probe_manifest.json"));
  EXPECT_EQ(manifest.at("tool"), "simulate");
  EXPECT_EQ(manifest.at("experiment"), "spectrum");
  for (const auto& output : manifest.at("outputs")) {
    const auto path = dir / output.at("file").get<std::string>();
    ASSERT_TRUE(fs::exists(path));
    EXPECT_EQ(fs::file_size(path), output.at("bytes").get<std::uint64_t>());
    EXPECT_EQ(hex64(fnv1a64_file(path)), output.at("fnv1a64").get<std::string>());
  }
  // config echo reproduces this run when fed back in
  EXPECT_NO_THROW(config_from_json(manifest.at("config")));
  fs::remove_all(dir);
}

TEST(Run, EmptyLayoutGivesUnitTransmission) {
  const auto dir = unique_temp_dir("empty");
  auto cfg = parse(R"({
    "name": "empty",
    "experiment": "spectrum",
    "layout": {"count": 0},
    "grid": {"start_nm": 1540, "stop_nm": 1560, "points": 21},
    "svg": false
  })");
  run_scenario(cfg, dir);
  std::ifstream in(dir / "empty_spectrum.csv");
  const csv::Table table = csv::read(in);
  ASSERT_EQ(table.rows.size(), 21u);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row[1], "1");  // transmission
    EXPECT_EQ(row[2], "0");  // reflection
  }
  fs::remove_all(dir);
}

TEST(Run, MetricsRowMatchesDirectEvaluation) {
  const auto dir = unique_temp_dir("metrics");
  const auto* scenario = find_scenario("fig4c");
  ASSERT_NE(scenario, nullptr);
  auto cfg = parse(scenario->json_text);
  const auto result = run_scenario(cfg, dir);
  EXPECT_NE(result.console.find("efficiency 96.4%"), std::string::npos);

  std::ifstream in(dir / "fig4c_metrics.csv");
  const csv::Table table = csv::read(in);
  ASSERT_EQ(table.rows.size(), 1u);
  const double eff = std::stod(table.rows[0][2]);
  const double fid = std::stod(table.rows[0][3]);

  const auto layout = to_layout(design_from_config(cfg.layout));
  const auto direct = switch_metrics(layout, packet_from_config(*cfg.packet),
                                     cfg.mode);
  EXPECT_NEAR(eff, direct.efficiency, 1e-12);
  EXPECT_NEAR(fid, direct.fidelity, 1e-12);
  fs::remove_all(dir);
}

TEST(Run, DisorderSameSeedSameBytesDifferentSeedDiffers) {
  auto make_cfg = [](std::uint64_t seed) {
    auto cfg = parse(R"({
      "name": "dis",
      "experiment": "disorder",
      "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "q_u": 50000},
                 "count": 4, "separation_um": 31.5, "group_velocity_c": 0.3},
      "grid": {"start_nm": 1545, "stop_nm": 1555, "points": 31},
      "disorder": {"target": "coupled_q", "mean": 500, "sigma": 50,
                   "realizations": 8},
      "svg": false
    })");
    cfg.seed = seed;
    return cfg;
  };
  const auto dir_a = unique_temp_dir("seed_a");
  const auto dir_b = unique_temp_dir("seed_b");
  const auto dir_c = unique_temp_dir("seed_c");
  run_scenario(make_cfg(42), dir_a);
  run_scenario(make_cfg(42), dir_b);
  run_scenario(make_cfg(43), dir_c);
  for (const char* file : {"dis_disorder.csv", "dis_draws.csv"}) {
    EXPECT_EQ(read_file(dir_a / file), read_file(dir_b / file)) << file;
  }
  EXPECT_NE(read_file(dir_a / "dis_draws.csv"), read_file(dir_c / "dis_draws.csv"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::remove_all(dir_c);
}

TEST(Run, SeedOverrideLandsInManifest) {
  const auto dir = unique_temp_dir("seedover");
  auto cfg = parse(R"({
    "name": "seeded",
    "experiment": "disorder",
    "layout": {"cavity": {"lambda_c_nm": 1550, "q_c": 500, "q_u": 50000},
               "count": 2, "separation_um": 31.5, "group_velocity_c": 0.3},
    "grid": {"start_nm": 1548, "stop_nm": 1552, "points": 11},
    "disorder": {"target": "separation", "mean": 31.5, "sigma": 0.5,
                 "realizations": 4},
    "seed": 1,
    "svg": false
  })");
  const auto result = run_scenario(cfg, dir, 7);
  EXPECT_EQ(result.seed, 7u);
  const auto manifest = nlohmann::json::parse(read_file(dir / "seeded_manifest.json"));
  EXPECT_EQ(manifest.at("seed"), 7);
  EXPECT_EQ(manifest.at("config").at("seed"), 7);
  fs::remove_all(dir);
}

TEST(Run, MitigationStagesRecoverTheWindow) {
  const auto dir = unique_temp_dir("mitigation");
  const auto* scenario = find_scenario("appE-mitigation");
  ASSERT_NE(scenario, nullptr);
  auto cfg = parse(scenario->json_text);
  cfg.grid->points = 301;  // keep the test fast
  run_scenario(cfg, dir);
  std::ifstream in(dir / "appE-mitigation_mitigation.csv");
  const csv::Table table = csv::read(in);
  const std::vector<std::string> expected = {
      "wavelength_nm",          "transmission_ideal",
      "reflection_ideal",       "transmission_1_weak_g",
      "reflection_1_weak_g",    "transmission_2_detune_to",
      "reflection_2_detune_to", "transmission_3_decouple",
      "reflection_3_decouple"};
  EXPECT_EQ(table.header, expected);

  // at the centre wavelength: ideal high, bad cavity kills it, both fixes
  // bring it back
  const std::size_t centre = table.rows.size() / 2;
  const double ideal = std::stod(table.rows[centre][1]);
  const double broken = std::stod(table.rows[centre][3]);
  const double detuned = std::stod(table.rows[centre][5]);
  const double decoupled = std::stod(table.rows[centre][7]);
  EXPECT_GT(ideal, 0.9);
  EXPECT_LT(broken, 0.1);
  EXPECT_GT(detuned, ideal - 0.1);
  EXPECT_NEAR(decoupled, ideal, 0.05);
  fs::remove_all(dir);
}

}  // namespace
