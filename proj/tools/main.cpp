// spateco: command-line pipeline over the spatial-economics toolkit.
//
// Commands share one JSON config (inputs, sector sets, indicator specs, model
// specs, moran settings, seed, output directory). Every command writes into a
// deterministic run directory <output>/<command>-<hash> that also receives a
// verbatim copy of the config, so a run can be audited and reproduced.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 estimation failure.
// stderr carries the structured error name.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spateco/csv.hpp"
#include "spateco/econometrics.hpp"
#include "spateco/error.hpp"
#include "spateco/indices.hpp"
#include "spateco/intensity.hpp"
#include "spateco/json_io.hpp"
#include "spateco/panel.hpp"
#include "spateco/report.hpp"
#include "spateco/spatial.hpp"
#include "spateco/synth.hpp"

namespace fs = std::filesystem;
using spateco::Error;
using spateco::ErrorKind;
using Json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string config_path;
  std::string config_bytes;
  std::string panel_path;
  spateco::PanelSchema panel_schema = spateco::PanelSchema::Long;
  std::string adjacency_path;  // may be empty
  std::vector<std::string> manufacturing;
  std::vector<std::string> producer_services;
  std::vector<spateco::IndicatorSpec> indicators;
  spateco::CoggFormula cogg = spateco::CoggFormula::BalancePlusHeight;
  std::vector<spateco::ModelSpec> models;
  std::size_t moran_permutations = 999;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string output_dir;
};

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << bytes;
}

std::vector<std::string> string_list(const Json& j, const std::string& key) {
  std::vector<std::string> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  cfg.config_path = path;
  if (!fs::exists(path)) throw Error(ErrorKind::ConfigError, "config file " + path + " not found");
  cfg.config_bytes = read_bytes(path);

  Json j;
  try {
    j = Json::parse(cfg.config_bytes);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }

  try {
    const auto& inputs = j.at("inputs");
    cfg.panel_path = inputs.at("panel").get<std::string>();
    if (inputs.contains("panel_schema")) {
      const auto s = inputs.at("panel_schema").get<std::string>();
      if (s == "long")
        cfg.panel_schema = spateco::PanelSchema::Long;
      else if (s == "wide")
        cfg.panel_schema = spateco::PanelSchema::Wide;
      else
        throw Error(ErrorKind::ConfigError, "panel_schema must be long or wide");
    }
    if (inputs.contains("adjacency")) cfg.adjacency_path = inputs.at("adjacency").get<std::string>();

    if (j.contains("sectors")) {
      cfg.manufacturing = string_list(j.at("sectors"), "manufacturing");
      cfg.producer_services = string_list(j.at("sectors"), "producer_services");
      if (cfg.manufacturing.empty() || cfg.producer_services.empty())
        throw Error(ErrorKind::ConfigError, "sector sets must be non-empty");
    }

    if (j.contains("indicators")) {
      for (const auto& spec : j.at("indicators")) {
        spateco::IndicatorSpec s;
        s.name = spec.at("name").get<std::string>();
        const auto orient = spec.at("orientation").get<std::string>();
        if (orient == "positive")
          s.orientation = spateco::Orientation::Positive;
        else if (orient == "negative")
          s.orientation = spateco::Orientation::Negative;
        else
          throw Error(ErrorKind::ConfigError, "orientation must be positive or negative");
        const auto dim = spec.at("dimension").get<std::string>();
        if (dim == "land-use-intensity")
          s.dimension = spateco::Dimension::LandUseIntensity;
        else if (dim == "economic-benefit")
          s.dimension = spateco::Dimension::EconomicBenefit;
        else if (dim == "ecological-benefit")
          s.dimension = spateco::Dimension::EcologicalBenefit;
        else
          throw Error(ErrorKind::ConfigError, "unknown dimension " + dim);
        cfg.indicators.push_back(std::move(s));
      }
    }

    if (j.contains("cogg")) {
      const auto v = j.at("cogg").at("variant").get<std::string>();
      if (v == "balance-plus-height")
        cfg.cogg = spateco::CoggFormula::BalancePlusHeight;
      else if (v == "balance-only")
        cfg.cogg = spateco::CoggFormula::BalanceOnly;
      else if (v == "height-only")
        cfg.cogg = spateco::CoggFormula::HeightOnly;
      else
        throw Error(ErrorKind::ConfigError, "unknown cogg variant " + v);
    }

    if (j.contains("models")) {
      for (const auto& m : j.at("models")) {
        spateco::ModelSpec spec;
        spec.name = m.at("name").get<std::string>();
        spec.dependent = m.at("dependent").get<std::string>();
        spec.focal = m.at("focal").get<std::string>();
        spec.include_quadratic = m.value("quadratic", false);
        for (const auto& c : m.at("controls")) spec.controls.push_back(c.get<std::string>());
        spec.year_effects = m.value("year_effects", false);
        cfg.models.push_back(std::move(spec));
      }
    }

    if (j.contains("moran") && j.at("moran").contains("permutations"))
      cfg.moran_permutations = j.at("moran").at("permutations").get<std::size_t>();
    if (j.contains("seed")) {
      cfg.seed = j.at("seed").get<std::uint64_t>();
      cfg.has_seed = true;
    }
    cfg.output_dir = j.value("output", "out");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("config: ") + e.what());
  }
  return cfg;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic run directory: same config bytes + command + flags give the
/// same path, so reruns overwrite to identical trees.
fs::path make_run_dir(const RunConfig& cfg, const std::string& command,
                      const std::string& flags) {
  std::uint64_t h = fnv1a(command);
  h = fnv1a(flags, h);
  h = fnv1a(cfg.config_bytes, h);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%08llx", static_cast<unsigned long long>(h & 0xffffffffULL));
  fs::path dir = fs::path(cfg.output_dir) / (command + "-" + hex);
  fs::create_directories(dir);
  write_bytes(dir / "config.json", cfg.config_bytes);
  return dir;
}

void require_input(const std::string& path, const std::string& what) {
  if (path.empty()) throw Error(ErrorKind::ConfigError, what + " path missing from config");
  if (!fs::exists(path)) throw Error(ErrorKind::ConfigError, what + " file " + path + " not found");
}

spateco::PanelDataset load_input_panel(const RunConfig& cfg) {
  require_input(cfg.panel_path, "panel");
  return spateco::load_panel(cfg.panel_path, cfg.panel_schema);
}

std::vector<std::pair<std::string, std::string>> load_edges(const std::string& path) {
  const auto t = spateco::csv::read_file(path);
  if (t.header != std::vector<std::string>{"city_a", "city_b"})
    throw Error(ErrorKind::MalformedHeader, path + ": adjacency header must be city_a,city_b");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& row : t.rows) {
    if (row.size() != 2)
      throw Error(ErrorKind::MalformedHeader, path + ": adjacency rows need two fields");
    edges.emplace_back(row[0], row[1]);
  }
  return edges;
}

void check_variables_exist(const spateco::PanelDataset& ds, const std::vector<std::string>& names,
                           const std::string& what) {
  for (const auto& n : names)
    if (!ds.has_variable(n))
      throw Error(ErrorKind::ConfigError, what + " " + n + " is not a panel variable");
}

void write_json(const fs::path& path, const Json& j) {
  write_bytes(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// indices

int cmd_indices(const RunConfig& cfg) {
  const fs::path dir = make_run_dir(cfg, "indices", "");
  auto ds = load_input_panel(cfg);
  if (cfg.manufacturing.empty() || cfg.producer_services.empty())
    throw Error(ErrorKind::ConfigError, "sectors section missing from config");
  check_variables_exist(ds, cfg.manufacturing, "sector");
  check_variables_exist(ds, cfg.producer_services, "sector");
  ds = spateco::interpolate_missing(ds);

  std::vector<std::string> all_sectors = cfg.manufacturing;
  all_sectors.insert(all_sectors.end(), cfg.producer_services.begin(),
                     cfg.producer_services.end());

  std::vector<std::vector<std::string>> rows;
  for (int year : ds.years()) {
    const auto table = spateco::extract_employment(ds, year, all_sectors);

    // Grouped two-sector table for the manufacturing / producer-services
    // aggregates and their co-agglomeration.
    spateco::EmploymentTable grouped;
    grouped.year = year;
    grouped.cities = table.cities;
    grouped.sectors = {"manufacturing", "producer_services"};
    grouped.employment = spateco::Matrix(table.cities.size(), 2);
    for (std::size_t ci = 0; ci < table.cities.size(); ++ci) {
      double man = 0.0, ser = 0.0;
      for (const auto& s : cfg.manufacturing) man += table.employment(ci, table.sector_index(s));
      for (const auto& s : cfg.producer_services)
        ser += table.employment(ci, table.sector_index(s));
      grouped.employment(ci, 0) = man;
      grouped.employment(ci, 1) = ser;
    }

    const auto lq_man = spateco::location_quotient(grouped, "manufacturing");
    const auto lq_ser = spateco::location_quotient(grouped, "producer_services");
    const auto cogg = spateco::coagglomeration(lq_man, lq_ser, cfg.cogg);
    const auto rdi = spateco::rdi(table, cfg.producer_services);

    auto emit = [&](const std::string& name, const spateco::IndexSeries& s) {
      for (std::size_t ci = 0; ci < s.cities.size(); ++ci)
        rows.push_back({s.cities[ci], std::to_string(year), name,
                        spateco::csv::format_double(s.values[ci])});
    };
    emit("LQ_manufacturing", lq_man);
    emit("LQ_producer_services", lq_ser);
    for (const auto& s : cfg.producer_services)
      emit("LQ_" + s, spateco::location_quotient(table, s));
    emit("RDI", rdi);
    emit("COGG", cogg);
  }
  spateco::csv::write_file((dir / "indices.csv").string(), {"city", "year", "index", "value"}, rows);
  std::cout << (dir / "indices.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// intensity

int cmd_intensity(const RunConfig& cfg, const std::string& method) {
  if (method != "vh" && method != "entropy")
    throw Error(ErrorKind::ConfigError, "method must be vh or entropy");
  const fs::path dir = make_run_dir(cfg, "intensity", method);
  auto ds = load_input_panel(cfg);
  if (cfg.indicators.empty())
    throw Error(ErrorKind::ConfigError, "indicators section missing from config");
  std::vector<std::string> names;
  for (const auto& s : cfg.indicators) names.push_back(s.name);
  check_variables_exist(ds, names, "indicator");
  ds = spateco::interpolate_missing(ds);

  const auto np = spateco::normalize(ds, cfg.indicators);
  const spateco::WeightVector w =
      (method == "vh") ? spateco::vh_weights(np) : spateco::entropy_weights(np);
  // Scores use sum-one weights so both methods report on the same scale.
  const auto scores = spateco::score(np, w.rescaled(spateco::WeightMode::SumOne));
  const auto classes = spateco::dynamic_classify(scores);

  std::vector<std::vector<std::string>> score_rows;
  for (std::size_t ci = 0; ci < scores.cities.size(); ++ci)
    for (std::size_t yi = 0; yi < scores.years.size(); ++yi)
      score_rows.push_back({scores.cities[ci], std::to_string(scores.years[yi]),
                            spateco::csv::format_double(scores.at(ci, yi))});
  spateco::csv::write_file((dir / "scores.csv").string(), {"city", "year", "score"}, score_rows);

  write_json(dir / "weights.json", spateco::weights_to_json(method, cfg.indicators, w));

  std::vector<std::vector<std::string>> class_rows;
  for (const auto& c : classes)
    class_rows.push_back({c.city, spateco::to_string(c.stability), spateco::to_string(c.intensity),
                          std::to_string(c.max_sequence_difference),
                          spateco::csv::format_double(c.mean_rank)});
  spateco::csv::write_file((dir / "classification.csv").string(),
                           {"city", "stability", "intensity", "max_sequence_difference", "mean_rank"},
                           class_rows);
  std::cout << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// moran

int cmd_moran(const RunConfig& cfg, const std::string& variable, int year) {
  if (!cfg.has_seed)
    throw Error(ErrorKind::ConfigError, "seed required for permutation inference");
  const fs::path dir = make_run_dir(cfg, "moran", variable + "/" + std::to_string(year));
  require_input(cfg.adjacency_path, "adjacency");
  auto ds = load_input_panel(cfg);
  if (!ds.has_variable(variable))
    throw Error(ErrorKind::ConfigError, "variable " + variable + " is not a panel variable");
  ds = spateco::interpolate_missing(ds);

  const auto edges = load_edges(cfg.adjacency_path);
  const auto w = spateco::build_weights(edges, ds.cities(), true);

  std::vector<double> x(ds.cities().size());
  const std::size_t yi = ds.year_index(year);
  const std::size_t vi = ds.variable_index(variable);
  for (std::size_t ci = 0; ci < x.size(); ++ci) x[ci] = *ds.value_at(ci, yi, vi);

  const auto global = spateco::global_moran(x, w, cfg.moran_permutations, cfg.seed);
  const auto local = spateco::local_moran(x, w, cfg.moran_permutations, cfg.seed);

  std::vector<std::string> warnings;
  for (const auto& c : w.isolated_cities())
    warnings.push_back("isolated city " + c + " contributes no spatial information");

  write_json(dir / "moran.json", spateco::moran_to_json(variable, year, global, local, warnings));
  std::cout << (dir / "moran.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const RunConfig& cfg, const std::string& model, const std::string& spec_name) {
  if (model != "ols" && model != "slm" && model != "sem")
    throw Error(ErrorKind::ConfigError, "model must be ols, slm or sem");
  const fs::path dir = make_run_dir(cfg, "fit", model + "/" + spec_name);

  const spateco::ModelSpec* spec = nullptr;
  for (const auto& m : cfg.models)
    if (m.name == spec_name) spec = &m;
  if (!spec) throw Error(ErrorKind::ConfigError, "model spec " + spec_name + " not in config");

  auto ds = load_input_panel(cfg);
  std::vector<std::string> needed = {spec->dependent, spec->focal};
  needed.insert(needed.end(), spec->controls.begin(), spec->controls.end());
  check_variables_exist(ds, needed, "model variable");

  std::vector<std::pair<std::string, std::string>> edges;
  if (model != "ols") {
    require_input(cfg.adjacency_path, "adjacency");
    edges = load_edges(cfg.adjacency_path);
  } else if (!cfg.adjacency_path.empty() && fs::exists(cfg.adjacency_path)) {
    edges = load_edges(cfg.adjacency_path);
  }

  // Tables in the published layout pair the linear and quadratic columns.
  std::vector<spateco::ModelSpec> variants;
  {
    spateco::ModelSpec linear = *spec;
    linear.include_quadratic = false;
    variants.push_back(linear);
    if (spec->include_quadratic) variants.push_back(*spec);
  }

  Json out;
  out["spec"] = spec_name;
  out["models"] = Json::array();
  std::vector<spateco::SpatialFit> fits;
  for (const auto& variant : variants) {
    auto d = spateco::build_design(ds, variant);
    if (model != "ols" && !d.balanced) d = spateco::balance_to_block(d);

    spateco::SpatialFit fit;
    if (model == "ols") {
      fit = spateco::fit_ols_fe(d);
      if (!edges.empty() && d.balanced) {
        // LM diagnostics back the lag-vs-error model choice.
        std::vector<std::pair<std::string, std::string>> kept;
        for (const auto& e : edges)
          if (std::count(d.cities.begin(), d.cities.end(), e.first) &&
              std::count(d.cities.begin(), d.cities.end(), e.second))
            kept.push_back(e);
        const auto w = spateco::build_weights(kept, d.cities, true);
        out["lm"] = spateco::lm_to_json(spateco::lm_tests(fit, d, w));
      }
    } else {
      std::vector<std::pair<std::string, std::string>> kept;
      for (const auto& e : edges)
        if (std::count(d.cities.begin(), d.cities.end(), e.first) &&
            std::count(d.cities.begin(), d.cities.end(), e.second))
          kept.push_back(e);
      const auto w = spateco::build_weights(kept, d.cities, true);
      fit = (model == "slm") ? spateco::fit_slm_fe(d, w) : spateco::fit_sem_fe(d, w);
    }
    out["models"].push_back(spateco::fit_to_json(fit, variant.name));
    fits.push_back(std::move(fit));
  }

  const auto table = spateco::summarize(fits, *spec);
  write_bytes(dir / "table.txt", spateco::render_text(table));
  write_json(dir / "table.json", out);
  std::cout << (dir / "table.txt").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const RunConfig& cfg, const std::string& generator, const std::string& params_path) {
  std::string params_bytes;
  Json params;
  if (!params_path.empty()) {
    if (!fs::exists(params_path))
      throw Error(ErrorKind::ConfigError, "params file " + params_path + " not found");
    params_bytes = read_bytes(params_path);
    try {
      params = Json::parse(params_bytes);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::ConfigError, std::string("params is not valid JSON: ") + e.what());
    }
  }
  if (generator != "density" && generator != "slm" && generator != "sem" && generator != "demo")
    throw Error(ErrorKind::ConfigError, "generator must be density, slm, sem or demo");
  if (generator != "demo" && params_path.empty())
    throw Error(ErrorKind::ConfigError, "generator " + generator + " needs --params");

  const fs::path dir = make_run_dir(cfg, "synth", generator + "/" + params_bytes);
  if (!params_path.empty()) write_bytes(dir / "params.json", params_bytes);

  std::uint64_t seed = cfg.seed;
  bool has_seed = cfg.has_seed;
  if (params.contains("seed")) {
    seed = params.at("seed").get<std::uint64_t>();
    has_seed = true;
  }
  if (!has_seed) throw Error(ErrorKind::ConfigError, "seed required for generation");

  try {
    spateco::PanelDataset ds({"_"}, {0}, {"_"});
    if (generator == "demo") {
      ds = spateco::gen_demo_panel(seed);
    } else if (generator == "density") {
      spateco::DensityParams p;
      p.omega = params.at("omega").get<double>();
      p.beta1 = params.at("beta1").get<double>();
      p.beta2 = params.at("beta2").get<double>();
      p.sigma = params.at("sigma").get<double>();
      p.n_cities = params.at("n_cities").get<std::size_t>();
      p.n_periods = params.at("n_periods").get<std::size_t>();
      ds = spateco::gen_density_panel(p, seed);
    } else {
      // slm / sem need a weight matrix: from the configured adjacency when
      // present, otherwise the deterministic demo map over n_cities.
      const std::size_t n_periods = params.at("n_periods").get<std::size_t>();
      spateco::SpatialWeights w;
      if (!cfg.adjacency_path.empty()) {
        require_input(cfg.adjacency_path, "adjacency");
        const auto edges = load_edges(cfg.adjacency_path);
        std::vector<std::string> cities;
        for (const auto& e : edges) {
          if (!std::count(cities.begin(), cities.end(), e.first)) cities.push_back(e.first);
          if (!std::count(cities.begin(), cities.end(), e.second)) cities.push_back(e.second);
        }
        std::sort(cities.begin(), cities.end());
        w = spateco::build_weights(edges, cities, true);
      } else {
        const std::size_t n = params.at("n_cities").get<std::size_t>();
        std::vector<std::string> cities(n);
        for (std::size_t i = 0; i < n; ++i) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "C%02zu", i + 1);
          cities[i] = buf;
        }
        w = spateco::build_weights(spateco::demo_edges(cities), cities, true);
      }
      std::vector<double> beta;
      for (const auto& b : params.at("beta")) beta.push_back(b.get<double>());
      if (generator == "slm") {
        spateco::SlmDgpParams p;
        p.rho = params.at("rho").get<double>();
        p.beta = beta;
        p.fe_spread = params.value("fe_spread", 0.0);
        p.sigma = params.at("sigma").get<double>();
        p.seed = seed;
        ds = spateco::gen_slm_panel(p, w, n_periods);
      } else {
        spateco::SemDgpParams p;
        p.lambda = params.at("lambda").get<double>();
        p.beta = beta;
        p.fe_spread = params.value("fe_spread", 0.0);
        p.sigma = params.at("sigma").get<double>();
        p.seed = seed;
        ds = spateco::gen_sem_panel(p, w, n_periods);
      }
    }
    spateco::save_panel(ds, (dir / "panel.csv").string());
  } catch (const Error&) {
    throw;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("params: ") + e.what());
  }
  std::cout << (dir / "panel.csv").string() << "\n";
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConfigError: return 2;
    case ErrorKind::NonConvergence:
    case ErrorKind::BoundarySolution: return 4;
    default: return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spateco: agglomeration indices, land-use intensity scoring, spatial statistics "
               "and spatial panel estimation"};
  app.require_subcommand(1);

  std::string config_path, method = "vh", variable, model, spec_name, generator, params_path;
  int year = 0;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration JSON")->required();
  };

  CLI::App* indices = app.add_subcommand("indices", "location quotients, RDI and co-agglomeration");
  add_config(indices);

  CLI::App* intensity = app.add_subcommand("intensity", "land-use intensity scores and classes");
  add_config(intensity);
  intensity->add_option("--method", method, "weighting method: vh or entropy");

  CLI::App* moran = app.add_subcommand("moran", "global and local Moran's I");
  add_config(moran);
  moran->add_option("--variable", variable, "panel variable")->required();
  moran->add_option("--year", year, "year on the panel axis")->required();

  CLI::App* fit = app.add_subcommand("fit", "fixed-effects panel estimation");
  add_config(fit);
  fit->add_option("--model", model, "ols, slm or sem")->required();
  fit->add_option("--spec", spec_name, "model spec name from the config")->required();

  CLI::App* synth = app.add_subcommand("synth", "synthetic panel generation");
  add_config(synth);
  synth->add_option("--generator", generator, "density, slm, sem or demo")->required();
  synth->add_option("--params", params_path, "generator parameter JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    const RunConfig cfg = load_config(config_path);
    if (indices->parsed()) return cmd_indices(cfg);
    if (intensity->parsed()) return cmd_intensity(cfg, method);
    if (moran->parsed()) return cmd_moran(cfg, variable, year);
    if (fit->parsed()) return cmd_fit(cfg, model, spec_name);
    if (synth->parsed()) return cmd_synth(cfg, generator, params_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
