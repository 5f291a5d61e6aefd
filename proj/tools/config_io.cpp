#include "config_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace boltzmix::cli {

namespace {

AngularKernel parse_kernel(const ordered_json& node) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "constant") return AngularKernel::constant(node.at("value").get<double>());
  if (kind == "tabulated") {
    std::vector<double> tau;
    std::vector<double> b;
    for (const auto& pair : node.at("table")) {
      tau.push_back(pair.at(0).get<double>());
      b.push_back(pair.at(1).get<double>());
    }
    return AngularKernel::tabulated(std::move(tau), std::move(b));
  }
  throw std::invalid_argument("config: unknown kernel kind '" + kind + "'");
}

InitialCondition parse_initial(const ordered_json& node) {
  const std::string type = node.at("type").get<std::string>();
  if (type == "maxwellian") {
    MaxwellianIC ic;
    ic.temperature = node.at("temperature").get<double>();
    if (node.contains("drift")) {
      for (int c = 0; c < 3; ++c) ic.drift[c] = node.at("drift").at(static_cast<std::size_t>(c)).get<double>();
    }
    return ic;
  }
  if (type == "two_temperature") {
    TwoTemperatureIC ic;
    ic.t_a = node.at("t_a").get<double>();
    ic.t_b = node.at("t_b").get<double>();
    ic.fraction_a = node.at("fraction_a").get<double>();
    return ic;
  }
  if (type == "spherical_shell") {
    SphericalShellIC ic;
    ic.speed = node.at("speed").get<double>();
    return ic;
  }
  throw std::invalid_argument("config: unknown initial condition type '" + type + "'");
}

ordered_json initial_to_json(const InitialCondition& ic) {
  ordered_json node;
  if (const auto* m = std::get_if<MaxwellianIC>(&ic)) {
    node["type"] = "maxwellian";
    node["temperature"] = m->temperature;
    node["drift"] = {m->drift[0], m->drift[1], m->drift[2]};
  } else if (const auto* tt = std::get_if<TwoTemperatureIC>(&ic)) {
    node["type"] = "two_temperature";
    node["t_a"] = tt->t_a;
    node["t_b"] = tt->t_b;
    node["fraction_a"] = tt->fraction_a;
  } else {
    const auto& shell = std::get<SphericalShellIC>(ic);
    node["type"] = "spherical_shell";
    node["speed"] = shell.speed;
  }
  return node;
}

}  // namespace

ToolConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  ordered_json root = ordered_json::parse(in);

  std::vector<double> masses;
  for (const auto& m : root.at("species").at("masses")) masses.push_back(m.get<double>());
  SpeciesSet species(masses);
  const int count = species.count();

  const auto& cs = root.at("cross_section");
  Eigen::MatrixXd gamma(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      gamma(i, j) = cs.at("gamma").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j))
                        .get<double>();
    }
  }
  std::vector<AngularKernel> kernels;
  kernels.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      kernels.push_back(parse_kernel(cs.at("kernels").at(static_cast<std::size_t>(i))
                                         .at(static_cast<std::size_t>(j))));
    }
  }

  ToolConfig config{SpeciesSet(masses), CrossSection(gamma, std::move(kernels)), {}, {}};

  if (root.contains("omega_constants")) {
    const auto& node = root.at("omega_constants");
    OmegaConstants omega;
    omega.c0 = node.at("c0").get<double>();
    omega.C0 = node.at("C0").get<double>();
    omega.c2 = node.at("c2").get<double>();
    omega.C2 = node.at("C2").get<double>();
    omega.C2eps = node.at("C2eps").get<double>();
    omega.eps = node.at("eps").get<double>();
    omega.C_kstar = node.at("C_kstar").get<double>();
    config.omega = omega;
  }

  if (root.contains("sim")) {
    const auto& node = root.at("sim");
    SimConfig sim{.species = config.species,
                  .cross_section = config.cross_section,
                  .particles_per_species = {},
                  .initial = {},
                  .moment_orders = {},
                  .exp_moment = {}};
    for (const auto& n : node.at("particles_per_species")) {
      sim.particles_per_species.push_back(n.get<std::size_t>());
    }
    for (const auto& ic : node.at("initial")) sim.initial.push_back(parse_initial(ic));
    if (node.contains("number_density")) sim.number_density = node.at("number_density").get<double>();
    if (node.contains("dt")) sim.dt = node.at("dt").get<double>();
    sim.t_end = node.at("t_end").get<double>();
    if (node.contains("diagnostic_every")) {
      sim.diagnostic_every = node.at("diagnostic_every").get<std::size_t>();
    }
    if (node.contains("moment_orders")) {
      for (const auto& k : node.at("moment_orders")) sim.moment_orders.push_back(k.get<double>());
    }
    if (node.contains("exp_moment")) {
      sim.exp_moment = ExpMomentParams{node.at("exp_moment").at("alpha").get<double>(),
                                       node.at("exp_moment").at("s").get<double>()};
    }
    if (node.contains("seed")) sim.seed = node.at("seed").get<std::uint64_t>();
    if (node.contains("majorant_cap_quantile")) {
      sim.majorant_cap_quantile = node.at("majorant_cap_quantile").get<double>();
    }
    if (root.contains("diagnostics")) {
      const auto& diag = root.at("diagnostics");
      if (diag.contains("entropy_bins")) sim.entropy_bins = diag.at("entropy_bins").get<int>();
      if (diag.contains("entropy_box_halfwidth")) {
        sim.entropy_box_halfwidth = diag.at("entropy_box_halfwidth").get<double>();
      }
      if (diag.contains("entropy_bootstrap")) {
        sim.entropy_bootstrap = diag.at("entropy_bootstrap").get<int>();
      }
    }
    config.sim = std::move(sim);
  }
  return config;
}

ordered_json echo_config(const ToolConfig& config) {
  ordered_json root;
  root["species"]["masses"] = ordered_json::array();
  for (int i = 0; i < config.species.count(); ++i) {
    root["species"]["masses"].push_back(config.species.mass(i));
  }
  root["cross_section"]["gamma"] = ordered_json::array();
  for (int i = 0; i < config.species.count(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < config.species.count(); ++j) row.push_back(config.cross_section.gamma(i, j));
    root["cross_section"]["gamma"].push_back(row);
  }
  root["cross_section"]["kernels"] = ordered_json::array();
  for (int i = 0; i < config.species.count(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < config.species.count(); ++j) {
      const AngularKernel& kernel = config.cross_section.kernel(i, j);
      ordered_json node;
      node["kind"] = kernel.kind() == AngularKernel::Kind::Constant ? "constant" : "tabulated";
      node["l1_norm"] = kernel.l1_norm();
      node["sup_norm"] = kernel.sup_norm();
      row.push_back(node);
    }
    root["cross_section"]["kernels"].push_back(row);
  }
  if (config.omega) {
    root["omega_constants"] = {{"c0", config.omega->c0},     {"C0", config.omega->C0},
                               {"c2", config.omega->c2},     {"C2", config.omega->C2},
                               {"C2eps", config.omega->C2eps}, {"eps", config.omega->eps},
                               {"C_kstar", config.omega->C_kstar}};
  }
  if (config.sim) {
    const SimConfig& sim = *config.sim;
    ordered_json node;
    node["particles_per_species"] = sim.particles_per_species;
    node["initial"] = ordered_json::array();
    for (const auto& ic : sim.initial) node["initial"].push_back(initial_to_json(ic));
    node["number_density"] = sim.number_density;
    node["dt"] = sim.dt;
    node["t_end"] = sim.t_end;
    node["diagnostic_every"] = sim.diagnostic_every;
    node["moment_orders"] = sim.moment_orders;
    if (sim.exp_moment) {
      node["exp_moment"] = {{"alpha", sim.exp_moment->alpha}, {"s", sim.exp_moment->s}};
    }
    node["seed"] = sim.seed;
    node["majorant_cap_quantile"] = sim.majorant_cap_quantile;
    root["sim"] = node;
    root["diagnostics"] = {{"entropy_bins", sim.entropy_bins},
                           {"entropy_box_halfwidth", sim.entropy_box_halfwidth},
                           {"entropy_bootstrap", sim.entropy_bootstrap}};
  }
  return root;
}

std::vector<double> parse_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw std::invalid_argument("range: expected start:step:end, got '" + text + "'");
  }
  const double start = std::stod(text.substr(0, first));
  const double step = std::stod(text.substr(first + 1, second - first - 1));
  const double end = std::stod(text.substr(second + 1));
  if (!(step > 0.0)) throw std::invalid_argument("range: step must be positive");
  std::vector<double> values;
  for (double v = start; v <= end + 0.5 * step; v += step) values.push_back(v);
  return values;
}

}  // namespace boltzmix::cli
