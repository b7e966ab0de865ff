// sphgp: simulate, fit, predict, diagnose, solar and cv subcommands sharing
// one output directory per experiment.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "sphgp/config.hpp"
#include "sphgp/errors.hpp"
#include "sphgp/experiment.hpp"
#include "sphgp/io.hpp"
#include "sphgp/posterior.hpp"
#include "sphgp/version.hpp"

namespace fs = std::filesystem;
using namespace sphgp;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::string input;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> evaluator;
  std::optional<std::size_t> mc_draws;
  std::optional<std::string> za_form;
};

ExperimentConfig effective_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config", "a config file is required");
  io::Json j = io::read_json(o.config);
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  if (o.seed) j["seed"] = *o.seed;
  if (o.evaluator) j["evaluator"] = *o.evaluator;
  if (o.mc_draws) j["mc_draws"] = *o.mc_draws;
  if (o.za_form) {
    if (!j.contains("solar")) j["solar"] = io::Json::object();
    j["solar"]["za_form"] = *o.za_form;
  }
  return ExperimentConfig::from_json(j);
}

fs::path out_dir(const Options& o) {
  const fs::path p(o.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory '" + p.string() + "': " + ec.message());
  return p;
}

fs::path in_dir(const Options& o) { return o.input.empty() ? fs::path(o.out) : fs::path(o.input); }

io::Metadata header(const ExperimentConfig& cfg) {
  return {{"scheme", cfg.sim.scheme.kind == TruncationScheme::Kind::Logarithmic ? "log" : "power"},
          {"TR", std::to_string(cfg.truncation())},
          {"T", std::to_string(cfg.times())},
          {"N", std::to_string(cfg.sim.n_lat) + "x" + std::to_string(cfg.sim.n_lon)},
          {"M", std::to_string(cfg.sim.M)},
          {"R", std::to_string(cfg.sim.R)},
          {"seed", std::to_string(cfg.sim.seed)}};
}

// The manifest of a directory accumulates one entry per command run in it.
void write_manifest(const fs::path& dir, const std::string& command, const ExperimentConfig& cfg,
                    const std::vector<std::string>& files) {
  const fs::path path = dir / "manifest.json";
  io::Json m;
  if (fs::exists(path)) m = io::read_json(path);
  m["tool"] = "sphgp";
  m["version"] = kVersion;
  m["config"] = cfg.to_json();
  m["truncation"] = cfg.truncation();
  m["grid"] = {cfg.sim.n_lat, cfg.sim.n_lon};
  m["emqe_divisor"] = "2n+1";
  m["commands"][command] = files;
  io::write_json(path, m);
}

void check_manifest(const fs::path& dir, const ExperimentConfig& cfg) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) throw IoError("missing manifest '" + path.string() + "'");
  const io::Json m = io::read_json(path);
  if (!m.contains("truncation") || !m.contains("grid")) throw IoError("manifest lacks truncation/grid entries");
  const int tr = m["truncation"].get<int>();
  if (tr != cfg.truncation())
    throw ConfigError("TR_scheme", "input truncation " + std::to_string(tr) + " differs from configured " +
                                       std::to_string(cfg.truncation()));
  const auto g = m["grid"];
  if (g[0].get<std::size_t>() != cfg.sim.n_lat || g[1].get<std::size_t>() != cfg.sim.n_lon)
    throw ConfigError("N_lat", "input grid differs from the configured grid");
}

fs::path need(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("missing input '" + p.string() + "'");
  return p;
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig cfg = effective_config(o);
  if (cfg.mode != ExperimentMode::Simulation) throw ConfigError("mode", "simulate needs mode = simulation");
  const fs::path dir = out_dir(o);
  const SimulationRun run = run_simulation(cfg);
  const auto meta = header(cfg);
  std::vector<std::string> files = {"latent.csv", "observed.csv", "candidates.csv", "generating.csv", "spectrum.csv"};
  io::write_coefficients(dir / "latent.csv", run.sim.latent, meta);
  io::write_coefficients(dir / "observed.csv", run.sim.observed, meta);
  io::write_hyperparams(dir / "candidates.csv", run.candidates, meta);
  io::write_hyperparams(dir / "generating.csv", run.generating, meta);
  io::write_spectrum(dir / "spectrum.csv", run.sim.spectrum, meta);
  const GridPtr grid = make_grid(cfg.sim.n_lat, cfg.sim.n_lon);
  for (std::size_t t : cfg.output_times) {
    const std::string name = "observed_field_t" + std::to_string(t) + ".csv";
    io::write_field(dir / name, synthesis(run.sim.observed, grid, t, 0), meta);
    files.push_back(name);
  }
  write_manifest(dir, "simulate", cfg, files);
  std::cout << "simulate: TR=" << cfg.truncation() << " T=" << cfg.sim.T << " R=" << cfg.sim.R << " -> " << dir.string()
            << "\n";
  return 0;
}

int cmd_fit(const Options& o) {
  const ExperimentConfig cfg = effective_config(o);
  const fs::path src = in_dir(o);
  check_manifest(src, cfg);
  const fs::path dir = out_dir(o);
  const CoefficientField obs = io::read_coefficients(need(src / "observed.csv"));
  const auto candidates = io::read_hyperparams(need(src / "candidates.csv"));
  const TimeVaryingEstimates est = ml2_fit(obs, candidates, cfg.fit);
  auto meta = header(cfg);
  meta.emplace_back("evaluator", cfg.fit.evaluator == EvaluatorKind::Closed ? "closed" : "mc");
  io::write_estimates(dir / "estimates.csv", est, meta);
  io::write_loglik_table(dir / "loglik_table.csv", est, meta);
  write_manifest(dir, "fit", cfg, {"estimates.csv", "loglik_table.csv"});
  std::cout << "fit: " << candidates.size() << " candidates x " << est.times << " times\n";
  return 0;
}

int cmd_predict(const Options& o) {
  const ExperimentConfig cfg = effective_config(o);
  const fs::path src = in_dir(o);
  check_manifest(src, cfg);
  const fs::path dir = out_dir(o);
  const CoefficientField obs = io::read_coefficients(need(src / "observed.csv"));
  const TimeVaryingEstimates est = io::read_estimates(need(src / "estimates.csv"));
  if (est.truncation != obs.truncation() || est.truncation != cfg.truncation())
    throw ConfigError("TR_scheme", "estimates and observations disagree on the truncation order");
  const PosteriorSummary post = posterior_coefficients(est, obs);
  const auto meta = header(cfg);
  io::write_coefficients(dir / "posterior_coeffs.csv", post.means, meta);

  io::Table eig;
  eig.metadata = meta;
  eig.columns = {"t", "n", "prior_B", "posterior_lambda", "shrinkage"};
  io::Table var;
  var.metadata = meta;
  var.columns = {"t", "total", "residual", "explained"};
  for (std::size_t t = 0; t < post.times; ++t) {
    for (int n = 0; n <= post.truncation; ++n) {
      const auto un = static_cast<std::size_t>(n);
      eig.add_row({static_cast<double>(t), static_cast<double>(n), post.prior[t][un], post.eigenvalues[t][un],
                   post.shrinkage[t][un]});
    }
    var.add_row({static_cast<double>(t), post.variance[t].total, post.variance[t].residual,
                 post.variance[t].explained});
  }
  io::write_csv(dir / "posterior_spectrum.csv", eig);
  io::write_csv(dir / "variance.csv", var);
  std::vector<std::string> files = {"posterior_coeffs.csv", "posterior_spectrum.csv", "variance.csv"};
  if (!cfg.output_times.empty()) {
    const GridPtr grid = make_grid(cfg.sim.n_lat, cfg.sim.n_lon);
    const auto fields = posterior_field(post, grid, 0);
    for (std::size_t t : cfg.output_times) {
      const std::string name = "posterior_field_t" + std::to_string(t) + ".csv";
      io::write_field(dir / name, fields[t], meta);
      files.push_back(name);
    }
  }
  write_manifest(dir, "predict", cfg, files);
  std::cout << "predict: posterior for " << post.times << " times\n";
  return 0;
}

int cmd_diagnose(const Options& o) {
  const ExperimentConfig cfg = effective_config(o);
  const fs::path src = in_dir(o);
  check_manifest(src, cfg);
  const fs::path dir = out_dir(o);
  const auto meta = header(cfg);
  const CoefficientField obs = io::read_coefficients(need(src / "observed.csv"));
  const CoefficientField means = io::read_coefficients(need(src / "posterior_coeffs.csv"));
  const TimeVaryingEstimates est = io::read_estimates(need(src / "estimates.csv"));
  std::vector<std::string> files;

  const fs::path truth_path = src / (cfg.mode == ExperimentMode::Solar ? "noiseless.csv" : "latent.csv");
  if (fs::exists(truth_path)) {
    const CoefficientField truth = io::read_coefficients(truth_path);
    io::write_emqe(dir / "emqe.csv", emqe(truth, means), meta);
    files.push_back("emqe.csv");
  }
  const fs::path latent_path = src / "latent.csv";
  if (cfg.mode == ExperimentMode::Simulation && fs::exists(latent_path)) {
    const CoefficientField latent = io::read_coefficients(latent_path);
    const PosteriorSummary post = posterior_coefficients(est, obs);
    const BiasTerms b = bias_terms(latent, obs, post);
    io::Table bias;
    bias.metadata = meta;
    bias.columns = {"t", "r", "S1", "S2", "error"};
    for (std::size_t t = 0; t < b.times; ++t)
      for (std::size_t r = 0; r < b.replicates; ++r)
        bias.add_row({static_cast<double>(t), static_cast<double>(r), b.s1_at(t, r), b.s2_at(t, r), b.error_at(t, r)});
    io::write_csv(dir / "bias.csv", bias);
    io::Table bm;
    bm.metadata = meta;
    bm.columns = {"t", "S1_mean", "S2_mean"};
    for (std::size_t t = 0; t < b.times; ++t) bm.add_row({static_cast<double>(t), b.s1_mean[t], b.s2_mean[t]});
    io::write_csv(dir / "bias_mean.csv", bm);
    files.insert(files.end(), {"bias.csv", "bias_mean.csv"});
  } else {
    std::cout << "diagnose: bias terms unavailable without latent coefficients\n";
  }

  const fs::path gen_path = src / "generating.csv";
  if (fs::exists(gen_path)) {
    const auto gen = io::read_hyperparams(gen_path);
    const std::vector<double> lags = integer_lags(est.times);
    const AngularSpectrum sp_true = angular_spectrum(gen.front(), lags, est.truncation);
    io::Table corr;
    corr.metadata = meta;
    corr.metadata.emplace_back("correlation_mode",
                               cfg.correlation_mode == CorrelationMode::TimeAveraged ? "averaged" : "per_time");
    corr.metadata.emplace_back("theoretical_hp", "replicate 0 generating hyperparameters");
    corr.columns = {"n", "lag", "theoretical", "posterior"};
    const AngularSpectrum sp_post = cfg.correlation_mode == CorrelationMode::TimeAveraged
                                        ? angular_spectrum(time_averaged_estimate(est), lags, est.truncation)
                                        : sp_true;
    for (int n = 0; n <= est.truncation; ++n) {
      const CorrelationCurves c = time_correlation(sp_true, sp_post, n);
      const std::vector<double> post_curve =
          cfg.correlation_mode == CorrelationMode::TimeAveraged ? c.posterior : per_time_correlation(est, lags, n);
      for (std::size_t l = 0; l < lags.size(); ++l)
        corr.add_row({static_cast<double>(n), lags[l], c.theoretical[l], post_curve[l]});
    }
    io::write_csv(dir / "correlation.csv", corr);
    files.push_back("correlation.csv");
  }
  write_manifest(dir, "diagnose", cfg, files);
  std::cout << "diagnose: wrote " << files.size() << " files\n";
  return 0;
}

int cmd_solar(const Options& o) {
  ExperimentConfig cfg = effective_config(o);
  cfg.mode = ExperimentMode::Solar;
  const fs::path dir = out_dir(o);
  const SolarRun run = run_solar(cfg);
  const SolarDataset& ds = run.data;
  const auto meta = header(cfg);
  std::vector<std::string> files;
  const std::size_t N = ds.nodes();
  for (std::size_t t = 0; t < ds.days.size(); ++t) {
    io::Table day;
    day.metadata = meta;
    day.metadata.emplace_back("day", io::format_number(ds.days[t]));
    day.columns = {"colat", "lon", "SI", "AP", "mask"};
    for (std::size_t r = 0; r < ds.replicates; ++r) day.columns.push_back("response_" + std::to_string(r));
    for (std::size_t a = 0; a < ds.grid->n_lat(); ++a)
      for (std::size_t b = 0; b < ds.grid->n_lon(); ++b) {
        const std::size_t i = a * ds.grid->n_lon() + b;
        std::vector<double> row = {ds.grid->colatitudes[a], ds.grid->longitudes[b], ds.si[t * N + i], ds.ap[t * N + i],
                                   static_cast<double>(ds.mask[t * N + i])};
        for (std::size_t r = 0; r < ds.replicates; ++r) row.push_back(ds.response_at(t, r)[i]);
        day.add_row(row);
      }
    const std::string name = "solar_day_" + std::to_string(t) + ".csv";
    io::write_csv(dir / name, day);
    files.push_back(name);
  }
  io::write_coefficients(dir / "observed.csv", ds.response_coeffs(), meta);
  io::write_coefficients(dir / "noiseless.csv", ds.noiseless_coeffs(), meta);
  io::write_hyperparams(dir / "candidates.csv", run.candidates, meta);
  files.insert(files.end(), {"observed.csv", "noiseless.csv", "candidates.csv"});
  io::Json constants = cfg.to_json()["solar"];
  constants["effect_hp"] = io::hyperparams_to_json(run.effect_hp);
  io::write_json(dir / "solar_constants.json", constants);
  files.push_back("solar_constants.json");
  write_manifest(dir, "solar", cfg, files);
  std::cout << "solar: " << ds.days.size() << " days, " << ds.replicates << " replicates -> " << dir.string() << "\n";
  return 0;
}

int cmd_cv(const Options& o) {
  const ExperimentConfig cfg = effective_config(o);
  if (cfg.sim.R < cfg.folds) throw ConfigError("R", "cross-validation needs R >= folds");
  const fs::path dir = out_dir(o);
  CvReport rep;
  if (cfg.mode == ExperimentMode::Solar) {
    const SolarRun run = run_solar(cfg);
    rep = cross_validate(run.data.noiseless_coeffs(), run.data.response_coeffs(), run.candidates, cfg.fit, cfg.folds,
                         cfg.sim.seed, true);
  } else {
    const SimulationRun run = run_simulation(cfg);
    rep = cross_validate(run.sim.latent, run.sim.observed, run.candidates, cfg.fit, cfg.folds, cfg.sim.seed, false);
  }
  auto meta = header(cfg);
  meta.emplace_back("folds", std::to_string(rep.folds));
  meta.emplace_back("fold_seed", std::to_string(rep.seed));
  std::vector<std::string> files = {"cv_emqe_average.csv", "cv_emqe_in_sample.csv", "cv_report.json"};
  io::write_emqe(dir / "cv_emqe_average.csv", rep.average, meta);
  io::write_emqe(dir / "cv_emqe_in_sample.csv", rep.in_sample, meta);
  io::Json j;
  j["folds"] = rep.folds;
  j["fold_seed"] = rep.seed;
  j["assignment"] = rep.assignment;
  j["fold_mean_emqe"] = io::Json::array();
  for (std::size_t f = 0; f < rep.folds; ++f) {
    const std::string name = "cv_emqe_fold" + std::to_string(f) + ".csv";
    io::write_emqe(dir / name, rep.fold_emqe[f], meta);
    files.push_back(name);
    j["fold_mean_emqe"].push_back(rep.fold_emqe[f].mean());
  }
  j["average_emqe"] = rep.average.mean();
  j["in_sample_emqe"] = rep.in_sample.mean();
  io::write_json(dir / "cv_report.json", j);
  write_manifest(dir, "cv", cfg, files);
  std::cout << "cv: average EMQE " << io::format_number(rep.average.mean()) << ", in-sample "
            << io::format_number(rep.in_sample.mean()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral empirical-Bayes Gaussian process regression on the sphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON experiment config")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("--evaluator", o.evaluator, "closed or mc")->check(CLI::IsMember({"closed", "mc"}));
    sub->add_option("--mc-draws", o.mc_draws, "Monte-Carlo draws per coefficient");
    sub->add_option("--za-form", o.za_form, "printed or standard zenith angle")
        ->check(CLI::IsMember({"printed", "standard"}));
  };
  const auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "directory with inputs from earlier stages (default: --out)");
  };

  auto* sim = app.add_subcommand("simulate", "simulate latent and observed coefficients");
  add_common(sim);
  auto* fit = app.add_subcommand("fit", "per-time ML-II estimation");
  add_common(fit);
  add_input(fit);
  auto* pred = app.add_subcommand("predict", "posterior means, eigenvalues and variance decomposition");
  add_common(pred);
  add_input(pred);
  auto* diag = app.add_subcommand("diagnose", "EMQE, bias terms and time correlation");
  add_common(diag);
  add_input(diag);
  auto* solar = app.add_subcommand("solar", "generate the synthetic solar dataset");
  add_common(solar);
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation over replicates");
  add_common(cv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (fit->parsed()) return cmd_fit(o);
    if (pred->parsed()) return cmd_predict(o);
    if (diag->parsed()) return cmd_diagnose(o);
    if (solar->parsed()) return cmd_solar(o);
    if (cv->parsed()) return cmd_cv(o);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
