#include "config_io.hpp"

#include "boltzmix/bounds.hpp"
#include "boltzmix/collision.hpp"
#include "boltzmix/dsmc.hpp"
#include "boltzmix/format.hpp"
#include "boltzmix/moments.hpp"
#include "boltzmix/povzner.hpp"
#include "boltzmix/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using boltzmix::cli::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

/// Records what a subcommand produced; one manifest per invocation, written
/// alongside the outputs, with a content hash per emitted file.
class Manifest {
 public:
  Manifest(std::string subcommand, ordered_json config)
      : subcommand_(std::move(subcommand)), config_(std::move(config)), started_(utc_now()) {}

  void set_seed(std::uint64_t seed) { seed_ = seed; }

  void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    outputs_.push_back({{"path", path.filename().string()},
                        {"fnv1a64", boltzmix::to_hex(boltzmix::fnv1a64(content))}});
  }

  void finalize(const fs::path& manifest_path) {
    ordered_json doc;
    doc["subcommand"] = subcommand_;
    doc["tool_version"] = boltzmix::kToolVersion;
    if (seed_) doc["seed"] = *seed_;
    doc["config"] = config_;
    doc["started_utc"] = started_;
    doc["finished_utc"] = utc_now();
    doc["outputs"] = outputs_;
    std::ofstream out(manifest_path, std::ios::binary);
    out << doc.dump(2) << "\n";
  }

 private:
  std::string subcommand_;
  ordered_json config_;
  std::string started_;
  std::optional<std::uint64_t> seed_;
  ordered_json outputs_ = ordered_json::array();
};

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json matrix_to_json(const Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override, std::size_t replicas) {
  boltzmix::cli::ToolConfig config = boltzmix::cli::load_config(config_path);
  if (!config.sim) {
    std::cerr << "simulate: config has no 'sim' section\n";
    return kExitUsage;
  }
  boltzmix::SimConfig sim = *config.sim;
  if (seed_override) sim.seed = *seed_override;
  config.sim = sim;

  const boltzmix::ValidationReport report = boltzmix::validate(sim.cross_section, sim.species);
  if (!report.ok()) {
    for (const auto& issue : report.issues) std::cerr << "invalid mixture: " << issue.message << "\n";
    return kExitValidation;
  }

  fs::create_directories(out_dir);
  Manifest manifest("simulate", boltzmix::cli::echo_config(config));
  manifest.set_seed(sim.seed);

  const boltzmix::SimResult result = boltzmix::run(sim);

  std::string csv = boltzmix::moment_csv_header(result.records.front()) + "\n";
  for (const auto& rec : result.records) csv += boltzmix::moment_csv_row(rec) + "\n";
  manifest.write_file(fs::path(out_dir) / "moments.csv", csv);

  ordered_json summary;
  summary["steps"] = result.summary.steps;
  summary["dt"] = result.summary.dt;
  summary["initial_m2"] = result.summary.initial_m2;
  summary["final_m2"] = result.summary.final_m2;
  summary["m2_relative_drift"] = result.summary.max_abs_m2_drift / result.summary.initial_m2;
  summary["momentum_relative_drift"] =
      result.summary.max_abs_momentum_drift / result.summary.momentum_scale;
  summary["momentum_scale"] = result.summary.momentum_scale;
  summary["collision_counters"] = {{"attempted", matrix_to_json(result.summary.attempted)},
                                   {"accepted", matrix_to_json(result.summary.accepted)}};
  summary["majorant_exceedances"] = matrix_to_json(result.summary.majorant_exceedances);
  summary["final_majorant"] = matrix_to_json(result.summary.final_majorant);
  ordered_json rates = ordered_json::array();
  for (Eigen::Index i = 0; i < result.summary.attempted.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < result.summary.attempted.cols(); ++j) {
      const long att = result.summary.attempted(i, j);
      row.push_back(att > 0 ? static_cast<double>(result.summary.accepted(i, j)) /
                                  static_cast<double>(att)
                            : 0.0);
    }
    rates.push_back(row);
  }
  summary["acceptance_rates"] = rates;
  manifest.write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  manifest.write_file(fs::path(out_dir) / "config.echo.json",
                      boltzmix::cli::echo_config(config).dump(2) + "\n");

  if (replicas >= 2) {
    const boltzmix::ReplicaAggregate agg = boltzmix::replicate(sim, replicas);
    std::string agg_csv = "t";
    for (const auto& col : agg.columns) agg_csv += "," + col + "_mean," + col + "_se";
    agg_csv += "\n";
    for (std::size_t row = 0; row < agg.times.size(); ++row) {
      agg_csv += boltzmix::format_double(agg.times[row]);
      for (Eigen::Index col = 0; col < agg.mean.cols(); ++col) {
        agg_csv += "," + boltzmix::format_double(agg.mean(static_cast<Eigen::Index>(row), col));
        agg_csv += "," + boltzmix::format_double(agg.std_error(static_cast<Eigen::Index>(row), col));
      }
      agg_csv += "\n";
    }
    manifest.write_file(fs::path(out_dir) / "aggregate.csv", agg_csv);
  }

  manifest.finalize(fs::path(out_dir) / "manifest.json");
  return kExitOk;
}

int run_verify(std::size_t cases, std::uint64_t seed, const std::string& out_path) {
  boltzmix::Rng rng(seed);

  double max_momentum = 0.0;
  double max_energy = 0.0;
  double max_identity = 0.0;
  double max_rel_speed = 0.0;
  for (std::size_t n = 0; n < cases; ++n) {
    const boltzmix::SpeciesSet species({std::pow(10.0, rng.uniform(-1.0, 1.0)),
                                        std::pow(10.0, rng.uniform(-1.0, 1.0))});
    const boltzmix::CollisionInput input{rng.normal3(1.0), rng.normal3(1.0), 0, 1};
    const Eigen::Vector3d sigma = rng.isotropic_direction();
    const auto out = boltzmix::collide(input, sigma, species);
    const auto [dp, de] = boltzmix::conservation_residuals(input, out, species);

    const double mi = species.mass(0);
    const double mj = species.mass(1);
    const double p_scale = mi * input.v.norm() + mj * input.v_star.norm() + 1e-300;
    const double e_scale =
        mi * input.v.squaredNorm() + mj * input.v_star.squaredNorm() + 1e-300;
    max_momentum = std::max(max_momentum, dp / p_scale);
    max_energy = std::max(max_energy, de / e_scale);

    const auto terms = boltzmix::energy_identity(input, species);
    const double mu = sigma.dot(terms.v_hat());
    const double left = boltzmix::bracket_squared(out.v_prime, 0, species);
    const double left_star = boltzmix::bracket_squared(out.v_star_prime, 1, species);
    max_identity = std::max(max_identity,
                            std::abs(left - (terms.p + terms.lambda * mu)) / terms.E);
    max_identity = std::max(max_identity,
                            std::abs(left_star - (terms.q - terms.lambda * mu)) / terms.E);

    const double u_in = (input.v - input.v_star).norm();
    const double u_out = (out.v_prime - out.v_star_prime).norm();
    max_rel_speed = std::max(max_rel_speed, std::abs(u_out - u_in) / (u_in + 1e-300));
  }

  // Inequality fuzz: generalized binomial and moment-product bounds.
  std::size_t inequality_cases = cases;
  std::size_t inequality_violations = 0;
  for (std::size_t n = 0; n < inequality_cases; ++n) {
    const double p = rng.uniform(1.0 + 1e-9, 20.0);
    const double x = rng.uniform(1e-3, 100.0);
    const double y = rng.uniform(1e-3, 100.0);
    if (!boltzmix::poly_inequality_I(x, y, p).holds) ++inequality_violations;
    const double b = rng.uniform(0.0, 2.0);
    const double a_hi = (p + 1.0) / 2.0;
    if (b + 1.0 <= a_hi) {
      const double a = rng.uniform(b + 1.0, a_hi);
      if (!boltzmix::poly_inequality_II(x, y, a, b, p).holds) ++inequality_violations;
    }
  }

  const double threshold = 1e-10;
  const bool pass = max_momentum < threshold && max_energy < threshold &&
                    max_identity < threshold && max_rel_speed < 1e-12 &&
                    inequality_violations == 0;

  ordered_json doc;
  doc["cases"] = cases;
  doc["max_momentum_residual"] = max_momentum;
  doc["max_energy_residual"] = max_energy;
  doc["max_identity_residual"] = max_identity;
  doc["max_relative_speed_residual"] = max_rel_speed;
  doc["inequality_cases"] = inequality_cases;
  doc["inequality_violations"] = inequality_violations;
  doc["thresholds"] = {{"momentum", threshold},
                       {"energy", threshold},
                       {"identity", threshold},
                       {"relative_speed", 1e-12}};
  doc["pass"] = pass;

  std::cout << doc.dump(2) << "\n";
  if (!out_path.empty()) {
    ordered_json config;
    config["cases"] = cases;
    config["seed"] = seed;
    Manifest manifest("verify", config);
    manifest.set_seed(seed);
    manifest.write_file(out_path, doc.dump(2) + "\n");
    manifest.finalize(fs::path(out_path).string() + ".manifest.json");
  }
  return pass ? kExitOk : kExitValidation;
}

int run_povzner_scan(const std::string& r_range, const std::string& n_range,
                     const std::string& out_path) {
  const auto r_grid = boltzmix::cli::parse_range(r_range);
  const auto n_grid = boltzmix::cli::parse_range(n_range);
  const auto rows = boltzmix::povzner_scan(r_grid, n_grid);
  std::string csv = "r,n,c_inf\n";
  for (const auto& row : rows) {
    csv += boltzmix::format_double(row.r) + "," + boltzmix::format_double(row.n) + "," +
           boltzmix::format_double(row.c_inf) + "\n";
  }
  ordered_json config;
  config["r"] = r_range;
  config["n"] = n_range;
  Manifest manifest("povzner-scan", config);
  manifest.write_file(out_path, csv);
  manifest.finalize(fs::path(out_path).string() + ".manifest.json");
  return kExitOk;
}

int run_kstar(const std::string& config_path, double grid_step, const std::string& out_path) {
  const boltzmix::cli::ToolConfig config = boltzmix::cli::load_config(config_path);
  const boltzmix::ValidationReport report = boltzmix::validate(config.cross_section, config.species);
  if (!report.ok()) {
    for (const auto& issue : report.issues) std::cerr << "invalid mixture: " << issue.message << "\n";
    return kExitValidation;
  }
  const boltzmix::KStarSummary summary =
      boltzmix::kstar_global(config.species, config.cross_section, grid_step);
  ordered_json doc;
  doc["pairs"] = matrix_to_json(summary.k_star_pairs);
  doc["k_bar"] = summary.k_bar;
  doc["gamma_bar"] = summary.gamma_bar;
  doc["k_star"] = summary.k_star;
  doc["grid_step"] = summary.grid_step;
  doc["horizon"] = summary.horizon_factor;
  Manifest manifest("kstar", boltzmix::cli::echo_config(config));
  manifest.write_file(out_path, doc.dump(2) + "\n");
  manifest.finalize(fs::path(out_path).string() + ".manifest.json");
  return kExitOk;
}

int run_bounds(const std::string& config_path, double k_request, double grid_step,
               const std::string& t_range, const std::string& out_path) {
  const boltzmix::cli::ToolConfig config = boltzmix::cli::load_config(config_path);
  if (!config.omega) {
    std::cerr << "bounds: config has no 'omega_constants' section\n";
    return kExitUsage;
  }
  const boltzmix::KStarSummary kstar =
      boltzmix::kstar_global(config.species, config.cross_section, grid_step);
  const double k = k_request > 0.0 ? k_request : kstar.k_star;

  const boltzmix::ClbInputs clb_in = boltzmix::omega_to_clb_inputs(config.species, *config.omega);
  const double c_lb = boltzmix::compute_clb(config.species, config.cross_section, clb_in.c,
                                            clb_in.C, clb_in.B, clb_in.eps);
  const boltzmix::ODIConstants consts =
      boltzmix::compute_ak_bk(k, kstar, *config.omega, c_lb, config.species, config.cross_section);
  const boltzmix::ODIConstants at_kstar = boltzmix::compute_ak_bk(
      kstar.k_star, kstar, *config.omega, c_lb, config.species, config.cross_section);
  const double cap = boltzmix::omega_cap_constant(at_kstar.A_k, at_kstar.B_k,
                                                  kstar.gamma_bar, kstar.k_star);

  ordered_json doc;
  doc["k"] = k;
  doc["k_star"] = kstar.k_star;
  doc["A_k"] = consts.A_k;
  doc["B_k"] = consts.B_k;
  doc["c_lb"] = c_lb;
  doc["C_kstar"] = cap;
  doc["envelope"] = ordered_json::array();
  for (double t : boltzmix::cli::parse_range(t_range)) {
    if (!(t > 0.0)) continue;
    doc["envelope"].push_back({t, boltzmix::generation_envelope(k, consts, t)});
  }
  Manifest manifest("bounds", boltzmix::cli::echo_config(config));
  manifest.write_file(out_path, doc.dump(2) + "\n");
  manifest.finalize(fs::path(out_path).string() + ".manifest.json");
  return kExitOk;
}

int run_envelope_check(const std::string& config_path, const std::string& moments_path,
                       double k, double grid_step, const std::string& kind,
                       const std::string& out_path) {
  const boltzmix::cli::ToolConfig config = boltzmix::cli::load_config(config_path);
  if (!config.omega) {
    std::cerr << "envelope-check: config has no 'omega_constants' section\n";
    return kExitUsage;
  }
  std::ifstream in(moments_path);
  if (!in) {
    std::cerr << "envelope-check: cannot open '" << moments_path << "'\n";
    return kExitUsage;
  }
  std::string header;
  std::getline(in, header);
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) columns.push_back(col);
  }
  const std::string wanted = "mk_" + boltzmix::format_double(k);
  std::size_t column_index = columns.size();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == wanted) column_index = c;
  }
  if (column_index == columns.size()) {
    std::cerr << "envelope-check: column '" << wanted << "' not present in " << moments_path
              << "\n";
    return kExitUsage;
  }

  std::vector<std::pair<double, double>> series;  // (t, mk)
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    series.emplace_back(cells.at(0), cells.at(column_index));
  }
  if (series.empty()) {
    std::cerr << "envelope-check: no data rows\n";
    return kExitUsage;
  }

  const boltzmix::KStarSummary kstar =
      boltzmix::kstar_global(config.species, config.cross_section, grid_step);
  const boltzmix::ClbInputs clb_in = boltzmix::omega_to_clb_inputs(config.species, *config.omega);
  const double c_lb = boltzmix::compute_clb(config.species, config.cross_section, clb_in.c,
                                            clb_in.C, clb_in.B, clb_in.eps);
  const boltzmix::ODIConstants consts =
      boltzmix::compute_ak_bk(k, kstar, *config.omega, c_lb, config.species, config.cross_section);

  ordered_json violations = ordered_json::array();
  std::size_t checked = 0;
  for (const auto& [t, mk] : series) {
    double envelope;
    if (kind == "generation") {
      if (!(t > 0.0)) continue;
      envelope = boltzmix::generation_envelope(k, consts, t);
    } else {
      envelope = boltzmix::propagation_envelope(consts, series.front().second);
    }
    ++checked;
    if (mk > envelope) {
      violations.push_back({{"t", t}, {"measured", mk}, {"envelope", envelope}});
    }
  }

  ordered_json doc;
  doc["k"] = k;
  doc["kind"] = kind;
  doc["A_k"] = consts.A_k;
  doc["B_k"] = consts.B_k;
  doc["c_lb"] = c_lb;
  doc["points_checked"] = checked;
  doc["violations"] = violations;
  doc["pass"] = violations.empty();
  std::cout << doc.dump(2) << "\n";
  if (!out_path.empty()) {
    ordered_json manifest_config;
    manifest_config["config"] = config_path;
    manifest_config["moments"] = moments_path;
    manifest_config["k"] = k;
    manifest_config["kind"] = kind;
    Manifest manifest("envelope-check", manifest_config);
    manifest.write_file(out_path, doc.dump(2) + "\n");
    manifest.finalize(fs::path(out_path).string() + ".manifest.json");
  }
  return violations.empty() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-species homogeneous Boltzmann mixture toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string moments_path;
  std::string r_range = "0.5:0.05:0.95";
  std::string n_range = "2:0.5:50";
  std::string t_range = "0.1:0.1:10";
  std::string kind = "generation";
  std::size_t cases = 100000;
  std::size_t replicas = 0;
  std::uint64_t seed = 1;
  bool seed_given = false;
  double grid_step = 0.5;
  double k_order = 0.0;

  auto* simulate = app.add_subcommand("simulate", "run a DSMC simulation");
  simulate->add_option("--config", config_path, "JSON configuration")->required();
  simulate->add_option("--out", out_path, "output directory")->required();
  simulate->add_option("--seed", seed, "override config seed")->each([&](const std::string&) {
    seed_given = true;
  });
  simulate->add_option("--replicas", replicas, "aggregate this many replicas");

  auto* verify = app.add_subcommand("verify", "fuzz collision and inequality checks");
  verify->add_option("--cases", cases, "fuzz cases");
  verify->add_option("--seed", seed, "rng seed");
  verify->add_option("--out", out_path, "write the JSON report here");

  auto* scan = app.add_subcommand("povzner-scan", "tabulate the normalized Povzner constant");
  scan->add_option("--r", r_range, "r grid start:step:end");
  scan->add_option("--n", n_range, "n grid start:step:end");
  scan->add_option("--out", out_path, "output CSV")->required();

  auto* kstar = app.add_subcommand("kstar", "locate moment-order thresholds");
  kstar->add_option("--config", config_path, "JSON configuration")->required();
  kstar->add_option("--grid-step", grid_step, "threshold search grid step");
  kstar->add_option("--out", out_path, "output JSON")->required();

  auto* bounds = app.add_subcommand("bounds", "assemble ODI constants and envelopes");
  bounds->add_option("--config", config_path, "JSON configuration")->required();
  bounds->add_option("--k", k_order, "moment order (default: k*)");
  bounds->add_option("--grid-step", grid_step, "threshold search grid step");
  bounds->add_option("--t", t_range, "envelope time grid start:step:end");
  bounds->add_option("--out", out_path, "output JSON")->required();

  auto* envelope = app.add_subcommand("envelope-check", "compare a moment series to envelopes");
  envelope->add_option("--config", config_path, "JSON configuration")->required();
  envelope->add_option("--moments", moments_path, "moments.csv from simulate")->required();
  envelope->add_option("--k", k_order, "moment order")->required();
  envelope->add_option("--kind", kind, "generation or propagation")
      ->check(CLI::IsMember({"generation", "propagation"}));
  envelope->add_option("--grid-step", grid_step, "threshold search grid step");
  envelope->add_option("--out", out_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(config_path, out_path,
                          seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt,
                          replicas);
    }
    if (verify->parsed()) return run_verify(cases, seed, out_path);
    if (scan->parsed()) return run_povzner_scan(r_range, n_range, out_path);
    if (kstar->parsed()) return run_kstar(config_path, grid_step, out_path);
    if (bounds->parsed()) return run_bounds(config_path, k_order, grid_step, t_range, out_path);
    if (envelope->parsed()) {
      return run_envelope_check(config_path, moments_path, k_order, grid_step, kind, out_path);
    }
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
