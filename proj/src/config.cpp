#include "sphgp/config.hpp"

#include <string>

#include "sphgp/errors.hpp"

namespace sphgp {

namespace {

using io::Json;

double number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

std::size_t count(const Json& v, const std::string& field) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(field, "expected a nonnegative integer");
  if (v.is_number_integer() && v.get<long long>() < 0) throw ConfigError(field, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

bool boolean(const Json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
  return v.get<bool>();
}

std::string string(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

BetaPrior beta_prior(const Json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(field, "expected [shape1, shape2]");
  return {number(v[0], field), number(v[1], field)};
}

NormalPrior normal_prior(const Json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(field, "expected [mean, variance]");
  return {number(v[0], field), number(v[1], field)};
}

PriorSpec priors_from(const Json& j) {
  if (!j.is_object()) throw ConfigError("priors", "expected an object");
  PriorSpec p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string f = "priors." + it.key();
    if (it.key() == "gamma") p.gamma = beta_prior(*it, f);
    else if (it.key() == "nu") p.nu = beta_prior(*it, f);
    else if (it.key() == "alpha") p.alpha = beta_prior(*it, f);
    else if (it.key() == "beta") p.beta = beta_prior(*it, f);
    else if (it.key() == "varpi") p.varpi = normal_prior(*it, f);
    else if (it.key() == "sigma") p.sigma = normal_prior(*it, f);
    else throw ConfigError(f, "unknown key");
  }
  return p;
}

SolarConfig solar_from(const Json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ConfigError("solar", "expected an object");
  SolarConfig s;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const std::string f = "solar." + k;
    if (k == "G0") s.G0 = number(*it, f);
    else if (k == "CSI") s.CSI = number(*it, f);
    else if (k == "SItop") s.SItop = number(*it, f);
    else if (k == "ER") s.ER = number(*it, f);
    else if (k == "OI_mean") s.OI_mean = number(*it, f);
    else if (k == "g") s.g = number(*it, f);
    else if (k == "day_start") s.day_start = number(*it, f);
    else if (k == "day_step") s.day_step = number(*it, f);
    else if (k == "days") s.days = count(*it, f);
    else if (k == "mesh_lat") s.mesh_lat = count(*it, f);
    else if (k == "mesh_lon") s.mesh_lon = count(*it, f);
    else if (k == "za_form") {
      try {
        s.za_form = parse_zenith_form(string(*it, f));
      } catch (const ConfigError&) {
        throw;
      } catch (const ArgumentError& e) {
        throw ConfigError(f, e.what());
      }
    } else if (k == "noise_sigma") cfg.solar_noise_sigma = number(*it, f);
    else if (k == "effect_hp") {
      try {
        cfg.solar_effect_hp = io::hyperparams_from_json(*it);
      } catch (const ConfigError& e) {
        throw ConfigError(f, e.what());
      }
    } else throw ConfigError(f, "unknown key");
  }
  return s;
}

}  // namespace

HyperparamVector ExperimentConfig::effect_hp() const {
  if (solar_effect_hp) return *solar_effect_hp;
  return prior_mode_s1(priors, solar_noise_sigma);
}

void ExperimentConfig::validate() const {
  if (mode == ExperimentMode::Simulation) {
    sim.validate();
  } else {
    solar.validate();
    SimulationConfig probe = sim;
    probe.T = solar.days;
    probe.validate();
    if (!(solar_noise_sigma >= 0.0)) throw ConfigError("solar.noise_sigma", "must be nonnegative");
  }
  try {
    priors.validate();
    sim.scheme.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw ConfigError("priors", e.what());
  }
  if (true_hp && true_hp->subfamily != sim.subfamily)
    throw ConfigError("true_hp", "subfamily differs from the configured subfamily");
  if (fit.evaluator == EvaluatorKind::MonteCarlo && fit.mc_draws < 1) throw ConfigError("mc_draws", "must be positive");
  if (!fit.pool_replicates && fit.replicate >= sim.R) throw ConfigError("replicate", "must be below R");
  for (std::size_t t : output_times)
    if (t >= times()) throw ConfigError("output_times", "time index " + std::to_string(t) + " is out of range");
  if (folds < 2) throw ConfigError("folds", "need at least 2 folds");
}

io::Json ExperimentConfig::to_json() const {
  Json j;
  j["mode"] = mode == ExperimentMode::Solar ? "solar" : "simulation";
  j["T"] = sim.T;
  j["N_lat"] = sim.n_lat;
  j["N_lon"] = sim.n_lon;
  j["M"] = sim.M;
  j["R"] = sim.R;
  j["TR_scheme"] = sim.scheme.kind == TruncationScheme::Kind::Logarithmic ? "log" : "power";
  j["rho"] = sim.scheme.rho;
  j["subfamily"] = std::string(subfamily_name(sim.subfamily));
  j["seed"] = sim.seed;
  j["evaluator"] = fit.evaluator == EvaluatorKind::Closed ? "closed" : "mc";
  j["mc_draws"] = fit.mc_draws;
  j["pool_replicates"] = fit.pool_replicates;
  j["replicate"] = fit.replicate;
  if (true_hp) j["true_hp"] = io::hyperparams_to_json(*true_hp);
  j["hp_per_replicate"] = hp_per_replicate;
  Json p;
  p["gamma"] = {priors.gamma.shape1, priors.gamma.shape2};
  p["nu"] = {priors.nu.shape1, priors.nu.shape2};
  p["alpha"] = {priors.alpha.shape1, priors.alpha.shape2};
  p["beta"] = {priors.beta.shape1, priors.beta.shape2};
  p["varpi"] = {priors.varpi.mean, priors.varpi.variance};
  p["sigma"] = {priors.sigma.mean, priors.sigma.variance};
  j["priors"] = p;
  j["output_times"] = output_times;
  j["correlation_mode"] = correlation_mode == CorrelationMode::TimeAveraged ? "averaged" : "per_time";
  j["folds"] = folds;
  Json s;
  s["G0"] = solar.G0;
  s["CSI"] = solar.CSI;
  s["SItop"] = solar.SItop;
  s["ER"] = solar.ER;
  s["OI_mean"] = solar.OI_mean;
  s["g"] = solar.g;
  s["day_start"] = solar.day_start;
  s["day_step"] = solar.day_step;
  s["days"] = solar.days;
  s["mesh_lat"] = solar.mesh_lat;
  s["mesh_lon"] = solar.mesh_lon;
  s["za_form"] = std::string(zenith_form_name(solar.za_form));
  s["noise_sigma"] = solar_noise_sigma;
  if (solar_effect_hp) s["effect_hp"] = io::hyperparams_to_json(*solar_effect_hp);
  j["solar"] = s;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const io::Json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  ExperimentConfig c;
  std::optional<Json> true_hp_json;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = *it;
    if (k == "mode") {
      const std::string m = string(v, k);
      if (m == "simulation") c.mode = ExperimentMode::Simulation;
      else if (m == "solar") c.mode = ExperimentMode::Solar;
      else throw ConfigError(k, "expected simulation or solar");
    } else if (k == "T") c.sim.T = count(v, k);
    else if (k == "N_lat") c.sim.n_lat = count(v, k);
    else if (k == "N_lon") c.sim.n_lon = count(v, k);
    else if (k == "M") c.sim.M = count(v, k);
    else if (k == "R") c.sim.R = count(v, k);
    else if (k == "TR_scheme") {
      const std::string s = string(v, k);
      if (s == "log") c.sim.scheme.kind = TruncationScheme::Kind::Logarithmic;
      else if (s == "power") c.sim.scheme.kind = TruncationScheme::Kind::PowerLaw;
      else throw ConfigError(k, "expected log or power");
    } else if (k == "rho") c.sim.scheme.rho = number(v, k);
    else if (k == "subfamily") {
      try {
        c.sim.subfamily = parse_subfamily(string(v, k));
      } catch (const ConfigError&) {
        throw;
      } catch (const ArgumentError& e) {
        throw ConfigError(k, e.what());
      }
    } else if (k == "seed") c.sim.seed = static_cast<std::uint64_t>(count(v, k));
    else if (k == "evaluator") {
      const std::string s = string(v, k);
      if (s == "closed") c.fit.evaluator = EvaluatorKind::Closed;
      else if (s == "mc") c.fit.evaluator = EvaluatorKind::MonteCarlo;
      else throw ConfigError(k, "expected closed or mc");
    } else if (k == "mc_draws") c.fit.mc_draws = count(v, k);
    else if (k == "pool_replicates") c.fit.pool_replicates = boolean(v, k);
    else if (k == "replicate") c.fit.replicate = count(v, k);
    else if (k == "true_hp") true_hp_json = v;
    else if (k == "hp_per_replicate") c.hp_per_replicate = boolean(v, k);
    else if (k == "priors") c.priors = priors_from(v);
    else if (k == "output_times") {
      if (!v.is_array()) throw ConfigError(k, "expected an array of time indices");
      for (const auto& e : v) c.output_times.push_back(count(e, k));
    } else if (k == "correlation_mode") {
      const std::string s = string(v, k);
      if (s == "averaged") c.correlation_mode = CorrelationMode::TimeAveraged;
      else if (s == "per_time") c.correlation_mode = CorrelationMode::PerTime;
      else throw ConfigError(k, "expected averaged or per_time");
    } else if (k == "folds") c.folds = count(v, k);
    else if (k == "solar") c.solar = solar_from(v, c);
    else throw ConfigError(k, "unknown key");
  }
  if (true_hp_json) {
    try {
      c.true_hp = io::hyperparams_from_json(*true_hp_json);
    } catch (const ConfigError& e) {
      throw ConfigError("true_hp", e.what());
    }
  }
  c.fit.mc_seed = c.sim.seed;
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  io::Json j;
  try {
    j = io::read_json(path);
  } catch (const IoError& e) {
    if (!std::filesystem::exists(path)) throw;
    throw ConfigError("<file>", e.what());
  }
  return from_json(j);
}

}  // namespace sphgp
