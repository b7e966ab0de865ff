#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sphgp/config.hpp"
#include "sphgp/errors.hpp"
#include "sphgp/io.hpp"

namespace sphgp {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sphgp_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(Numbers, ShortestRoundTrip) {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.5e-300}) {
    EXPECT_EQ(io::parse_number(io::format_number(v)), v);
  }
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_TRUE(std::isnan(io::parse_number(io::format_number(std::nan("")))));
  EXPECT_EQ(io::parse_number(io::format_number(-INFINITY)), -INFINITY);
  EXPECT_THROW(io::parse_number("1,5"), IoError);
}

using IoFiles = TempDir;

TEST_F(IoFiles, CsvRoundTrip) {
  io::Table t;
  t.metadata = {{"TR", "3"}, {"note", "x"}};
  t.columns = {"a", "b"};
  t.add_row({1.5, -2.0});
  t.add_row({0.1, 1e-300});
  io::write_csv(dir_ / "t.csv", t);
  const auto back = io::read_csv(dir_ / "t.csv");
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.values, t.values);
  EXPECT_EQ(back.meta("TR"), "3");
  EXPECT_TRUE(back.has_meta("note"));
  EXPECT_EQ(back.column("b"), 1u);
  EXPECT_THROW(back.column("c"), IoError);
  std::ifstream in(dir_ / "t.csv");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "# TR=3");
}

TEST_F(IoFiles, MissingFileIsIoError) {
  EXPECT_THROW(io::read_csv(dir_ / "absent.csv"), IoError);
  EXPECT_THROW(io::read_json(dir_ / "absent.json"), IoError);
}

TEST_F(IoFiles, CoefficientRoundTrip) {
  CoefficientField c(2, 3, 2);
  RandomStream rs(1, StreamTag::Noise);
  for (double& v : c.raw()) v = rs.normal();
  io::write_coefficients(dir_ / "c.csv", c, {{"kind", "latent"}});
  const auto back = io::read_coefficients(dir_ / "c.csv");
  EXPECT_TRUE(back.same_shape(c));
  EXPECT_EQ(back.raw(), c.raw());
  const auto table = io::read_csv(dir_ / "c.csv");
  EXPECT_EQ(table.meta("TR"), "2");
  EXPECT_EQ(table.meta("kind"), "latent");
  EXPECT_EQ(table.columns, (std::vector<std::string>{"t", "r", "n", "j", "value"}));
}

TEST_F(IoFiles, HyperparamsRoundTrip) {
  const std::vector<HyperparamVector> hps{HyperparamVector::s1(0.4, 0.2, 0.7, 0.8, 0.25),
                                          HyperparamVector::s2(1.3, 0.6, 0.9, 0.1)};
  io::write_hyperparams(dir_ / "h.csv", hps);
  EXPECT_EQ(io::read_hyperparams(dir_ / "h.csv"), hps);
  for (const auto& hp : hps) EXPECT_EQ(io::hyperparams_from_json(io::hyperparams_to_json(hp)), hp);
  io::Json bad = io::hyperparams_to_json(hps[0]);
  bad["delta"] = 1.0;
  EXPECT_THROW(io::hyperparams_from_json(bad), ConfigError);
}

TEST_F(IoFiles, EstimatesAndEmqeRoundTrip) {
  CoefficientField obs(1, 4, 3);
  RandomStream rs(2, StreamTag::Noise);
  for (double& v : obs.raw()) v = rs.normal();
  const std::vector<HyperparamVector> cands{HyperparamVector::s1(0.4, 0.2, 0.7, 0.8, 0.25),
                                            HyperparamVector::s1(0.6, 0.5, 0.6, 0.9, 0.5)};
  const auto est = ml2_fit(obs, cands);
  io::write_estimates(dir_ / "e.csv", est);
  const auto back = io::read_estimates(dir_ / "e.csv");
  EXPECT_EQ(back.truncation, est.truncation);
  EXPECT_EQ(back.times, est.times);
  EXPECT_EQ(back.index, est.index);
  EXPECT_EQ(back.selected, est.selected);
  EXPECT_EQ(back.loglik, est.loglik);

  const auto e = emqe(obs, posterior_coefficients(est, obs).means);
  io::write_emqe(dir_ / "q.csv", e);
  const auto eb = io::read_emqe(dir_ / "q.csv");
  EXPECT_EQ(eb.values, e.values);
  EXPECT_EQ(io::read_csv(dir_ / "q.csv").meta("emqe_divisor"), "2n+1");
}

ExperimentConfig load_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return ExperimentConfig::load(p);
}

TEST_F(IoFiles, ConfigDefaultsAndOverrides) {
  const auto c = load_text(dir_ / "a.json", R"({"T": 20, "N_lat": 8, "N_lon": 16, "M": 10, "R": 50, "seed": 9,
    "priors": {"gamma": [3, 4]}, "evaluator": "mc", "mc_draws": 50})");
  EXPECT_EQ(c.sim.T, 20u);
  EXPECT_EQ(c.truncation(), 3);
  EXPECT_EQ(c.priors.gamma.shape1, 3.0);
  EXPECT_EQ(c.priors.nu.shape1, 2.0);
  EXPECT_EQ(c.fit.evaluator, EvaluatorKind::MonteCarlo);
  EXPECT_EQ(c.fit.mc_seed, 9u);
  const auto again = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(again.to_json(), c.to_json());
}

TEST_F(IoFiles, SolarConfig) {
  const auto c = load_text(dir_ / "s.json", R"({"mode": "solar", "N_lat": 8, "N_lon": 16, "M": 10, "R": 50,
    "solar": {"days": 20, "za_form": "standard", "noise_sigma": 0.3}})");
  EXPECT_EQ(c.mode, ExperimentMode::Solar);
  EXPECT_EQ(c.times(), 20u);
  EXPECT_EQ(c.solar.za_form, ZenithForm::Standard);
  EXPECT_EQ(c.solar_noise_sigma, 0.3);
  EXPECT_EQ(c.effect_hp().subfamily, Subfamily::S1);
}

void expect_field_error(const io::Json& j, const std::string& field) {
  try {
    ExperimentConfig::from_json(j);
    ADD_FAILURE() << "expected ConfigError for " << field;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), field);
  }
}

TEST(ConfigErrors, FieldLevelMessages) {
  expect_field_error(io::Json::parse(R"({"Tee": 3})"), "Tee");
  expect_field_error(io::Json::parse(R"({"T": "many"})"), "T");
  expect_field_error(io::Json::parse(R"({"T": -3})"), "T");
  expect_field_error(io::Json::parse(R"({"priors": {"zeta": [1, 2]}})"), "priors.zeta");
  expect_field_error(io::Json::parse(R"({"solar": {"albedo": 0.3}})"), "solar.albedo");
  expect_field_error(io::Json::parse(R"({"evaluator": "exact"})"), "evaluator");
  expect_field_error(io::Json::parse(R"({"T": 50, "N_lat": 3})"), "N_lat");
  expect_field_error(io::Json::parse(R"({"output_times": [70]})"), "output_times");
  expect_field_error(io::Json::parse(R"({"folds": 1})"), "folds");
}

TEST_F(IoFiles, MalformedConfigFile) {
  std::ofstream(dir_ / "bad.json") << "{ not json";
  EXPECT_THROW(ExperimentConfig::load(dir_ / "bad.json"), ConfigError);
  EXPECT_THROW(ExperimentConfig::load(dir_ / "none.json"), IoError);
}

}  // namespace
}  // namespace sphgp
