#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "sphgp/errors.hpp"
#include "sphgp/experiment.hpp"

namespace sphgp {
namespace {

void expect_partition(const std::vector<std::vector<std::size_t>>& folds, std::size_t R) {
  std::vector<std::size_t> all;
  std::size_t lo = R, hi = 0;
  for (const auto& f : folds) {
    all.insert(all.end(), f.begin(), f.end());
    lo = std::min(lo, f.size());
    hi = std::max(hi, f.size());
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(R);
  std::iota(expect.begin(), expect.end(), std::size_t{0});
  EXPECT_EQ(all, expect);
  EXPECT_LE(hi - lo, 1u);
}

TEST(Folds, PartitionAndBalance) {
  for (std::size_t R : {5, 7, 50, 51, 203})
    for (std::uint64_t seed : {1, 2, 3}) expect_partition(make_folds(R, 5, seed), R);
  EXPECT_EQ(make_folds(40, 5, 4), make_folds(40, 5, 4));
  EXPECT_NE(make_folds(40, 5, 4), make_folds(40, 5, 5));
}

TEST(Folds, FiveReplicatesHoldOutOneEach) {
  for (const auto& f : make_folds(5, 5, 9)) EXPECT_EQ(f.size(), 1u);
  EXPECT_THROW(make_folds(4, 5, 1), ArgumentError);
  EXPECT_THROW(make_folds(10, 1, 1), ArgumentError);
}

ExperimentConfig sim_config(std::size_t R, std::uint64_t seed) {
  ExperimentConfig c;
  c.sim.T = 8;
  c.sim.n_lat = 4;
  c.sim.n_lon = 8;
  c.sim.M = 5;
  c.sim.R = R;
  c.sim.seed = seed;
  c.hp_per_replicate = false;
  return c;
}

TEST(CrossValidate, ReportShape) {
  const auto run = run_simulation(sim_config(12, 3));
  const auto rep = cross_validate(run.sim.latent, run.sim.observed, run.candidates, {}, 5, 3, false);
  EXPECT_EQ(rep.folds, 5u);
  ASSERT_EQ(rep.fold_emqe.size(), 5u);
  expect_partition(rep.assignment, 12);
  for (std::size_t i = 0; i < rep.average.values.size(); ++i) {
    double s = 0.0;
    for (const auto& f : rep.fold_emqe) s += f.values[i];
    EXPECT_NEAR(rep.average.values[i], s / 5, 1e-15);
  }
  EXPECT_EQ(rep.in_sample.values.size(), rep.average.values.size());
}

TEST(CrossValidate, FiveReplicates) {
  const auto run = run_simulation(sim_config(5, 4));
  const auto rep = cross_validate(run.sim.latent, run.sim.observed, run.candidates, {}, 5, 4, false);
  for (const auto& f : rep.assignment) EXPECT_EQ(f.size(), 1u);
  const auto few = run_simulation(sim_config(4, 4));
  EXPECT_THROW(cross_validate(few.sim.latent, few.sim.observed, few.candidates, {}, 5, 4, false), ArgumentError);
}

TEST(CrossValidate, ReplicateOrderDoesNotChangeFoldSizes) {
  const auto run = run_simulation(sim_config(13, 5));
  std::vector<std::size_t> perm(13);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::reverse(perm.begin(), perm.end());
  const auto lat = run.sim.latent.select_replicates(perm);
  const auto obs = run.sim.observed.select_replicates(perm);
  const auto a = cross_validate(run.sim.latent, run.sim.observed, run.candidates, {}, 5, 6, false);
  const auto b = cross_validate(lat, obs, run.candidates, {}, 5, 6, false);
  for (std::size_t f = 0; f < 5; ++f) EXPECT_EQ(a.assignment[f].size(), b.assignment[f].size());
}

TEST(RunSimulation, GeneratingHyperparameters) {
  auto c = sim_config(6, 7);
  const auto shared = run_simulation(c);
  for (const auto& hp : shared.generating) EXPECT_EQ(hp, shared.generating[0]);
  c.hp_per_replicate = true;
  const auto per = run_simulation(c);
  EXPECT_FALSE(per.generating[0] == per.generating[1]);
  c.true_hp = HyperparamVector::s1(0.4, 0.2, 0.7, 0.8, 0.25);
  const auto fixed = run_simulation(c);
  for (const auto& hp : fixed.generating) EXPECT_EQ(hp, *c.true_hp);
  EXPECT_EQ(fixed.candidates, shared.candidates);
}

TEST(RunSolar, ShapesAndDetrendedCv) {
  ExperimentConfig c;
  c.mode = ExperimentMode::Solar;
  c.sim.n_lat = 6;
  c.sim.n_lon = 12;
  c.sim.M = 4;
  c.sim.R = 10;
  c.sim.seed = 2;
  c.solar.days = 6;
  c.solar.mesh_lat = 36;
  c.solar.mesh_lon = 36;
  const auto run = run_solar(c);
  EXPECT_EQ(run.data.days.size(), 6u);
  EXPECT_EQ(run.data.replicates, 10u);
  EXPECT_EQ(run.data.truncation, c.truncation());
  const auto rep = cross_validate(run.data.noiseless_coeffs(), run.data.response_coeffs(), run.candidates, {}, 5, 2,
                                  true);
  for (double v : rep.average.values) EXPECT_TRUE(std::isfinite(v));
}

}  // namespace
}  // namespace sphgp
