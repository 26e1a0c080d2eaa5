#include <set>

#include <gtest/gtest.h>

#include "lbf/data.hpp"
#include "lbf/datasets.hpp"
#include "lbf/kflats.hpp"
#include "lbf/metrics.hpp"

using namespace lbf;

namespace {

KFlatsConfig planes_config(KFlatsInit init) {
  KFlatsConfig cfg;
  cfg.d = 2;
  cfg.K = 3;
  cfg.kind = FlatKind::Affine;
  cfg.init = init;
  return cfg;
}

}  // namespace

TEST(KFlats, EnergyNonIncreasing) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    SyntheticSpec spec;
    spec.dims = {1, 2, 2};
    spec.ambient = 3;
    spec.samples_per_subspace = 80;
    spec.outlier_fraction = 0.1;
    spec.seed = s;
    const auto data = generate(spec);
    KFlatsConfig cfg;
    cfg.d = 2;
    cfg.K = 3;
    Rng rng(s);
    const auto res = kflats(data.cloud, cfg, std::nullopt, rng);
    for (std::size_t i = 1; i < res.energy_trace.size(); ++i) {
      ASSERT_LE(res.energy_trace[i], res.energy_trace[i - 1] * (1 + 1e-12));
    }
    EXPECT_NEAR(res.energy_trace.back(), res.l2_energy, 1e-12 * (1 + res.l2_energy));
  }
}

TEST(KFlats, StartingAtTrueFlatsStaysThere) {
  const auto data = datasets::parallel_planes(200, 1);
  Rng rng(0);
  const auto res = kflats(data.cloud, planes_config(RandomInit{}), data.flats, rng);
  EXPECT_EQ(misclassification_rate(res.labels, data.truth), 0.0);
  EXPECT_LT(res.l2_energy, 1e-20);
  EXPECT_LE(res.iterations, 1u);
}

TEST(KFlats, SmallFixedNeighborhoodSeparatesParallelPlanes) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto data = datasets::parallel_planes(500, s);
    Rng rng(s);
    const auto res = kflats(data.cloud, planes_config(FixedNeighborhood{10}), std::nullopt, rng);
    EXPECT_EQ(misclassification_rate(res.labels, data.truth), 0.0) << "seed " << s;
  }
}

TEST(KFlats, RandomInitOftenFailsOnParallelPlanes) {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto data = datasets::parallel_planes(500, s);
    Rng rng(s + 1);
    const auto res = kflats(data.cloud, planes_config(RandomInit{}), std::nullopt, rng);
    total += misclassification_rate(res.labels, data.truth) / 100.0;
  }
  EXPECT_GT(total / 20, 0.2);
}

TEST(FarthestInsertion, SingleFlatAndDistinctSeeds) {
  const auto data = datasets::parallel_planes(100, 3);
  Rng rng(3);
  const auto one = farthest_insertion_init(data.cloud, 2, 1, FixedNeighborhood{10}, rng);
  ASSERT_EQ(one.flats.size(), 1u);
  ASSERT_EQ(one.seeds.size(), 1u);
  const auto three = farthest_insertion_init(data.cloud, 2, 3, FixedNeighborhood{10}, rng);
  EXPECT_EQ(std::set<std::size_t>(three.seeds.begin(), three.seeds.end()).size(), 3u);
  std::set<int> planes;
  for (auto s : three.seeds) planes.insert(data.truth[s]);
  EXPECT_EQ(planes.size(), 3u);
}

TEST(FarthestInsertion, Errors) {
  const auto data = datasets::parallel_planes(10, 3);
  Rng rng(3);
  EXPECT_THROW(farthest_insertion_init(data.cloud, 2, 3, FixedNeighborhood{40}, rng), Error);
  EXPECT_THROW(farthest_insertion_init(data.cloud, 2, 0, FixedNeighborhood{5}, rng), Error);
}

TEST(KFlats, EmptyClusterIsReseeded) {
  // Two identical initial flats leave the second one empty.
  const auto data = datasets::parallel_planes(50, 2);
  Rng rng(0);
  KFlatsConfig cfg = planes_config(RandomInit{});
  const auto res = kflats(data.cloud, cfg, std::vector<Flat>{data.flats[0], data.flats[0], data.flats[1]}, rng);
  EXPECT_FALSE(res.has_empty_cluster);
  EXPECT_EQ(misclassification_rate(res.labels, data.truth), 0.0);
}

TEST(KFlats, BestOfKeepsSmallestEnergy) {
  const auto data = datasets::noisy_affine_planes(150, 5);
  const auto cfg = planes_config(RandomInit{});
  const auto best = kflats_best_of(data.cloud, cfg, 8, 11);
  for (std::size_t r = 0; r < 8; ++r) {
    Rng rng = make_rng(11, "kflats-restart", r);
    const auto run = kflats(data.cloud, cfg, std::nullopt, rng);
    EXPECT_LE(best.l2_energy, run.l2_energy);
  }
  const auto again = kflats_best_of(data.cloud, cfg, 8, 11);
  EXPECT_EQ(again.labels, best.labels);
}
