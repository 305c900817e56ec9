#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qsurr/error.hpp"
#include "qsurr/spectrum.hpp"
#include "qsurr/surrogate.hpp"

using namespace qsurr;
using namespace qsurr::spectrum;
using std::numbers::pi;

TEST(OmegaMax, FromConfig) {
  EXPECT_EQ(omega_max_of(qsim::CircuitConfig::make(4, 2, 4)).omega_max, (std::vector<int>{2, 2, 2, 2}));
  EXPECT_EQ(omega_max_of(qsim::CircuitConfig::make(4, 1, 2)).omega_max, (std::vector<int>{2, 2}));
  EXPECT_EQ(omega_max_of(qsim::CircuitConfig::make(1, 3, 1)).omega_max, (std::vector<int>{3}));
}

TEST(LatticeSize, Exact) {
  EXPECT_EQ(lattice_size({{2, 2, 2, 2}}), 625);
  EXPECT_EQ(lattice_size({std::vector<int>(13, 1)}), 1594323);
  EXPECT_EQ(lattice_size({{0, 0}}), 1);
  EXPECT_EQ(canonical_count({{2, 2}}), 12);
  // Well beyond 64 bits.
  BigInt expect = 1;
  for (int i = 0; i < 40; ++i) expect *= 5;
  EXPECT_EQ(lattice_size({std::vector<int>(40, 2)}), expect);
}

TEST(Enumerate, OneDimensional) {
  const auto v = enumerate_lattice({{1}}, 100);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].components, std::vector<int>{-1});
  EXPECT_EQ(v[1].components, std::vector<int>{0});
  EXPECT_EQ(v[2].components, std::vector<int>{1});
}

TEST(Enumerate, LexicographicAndConjugateClosed) {
  const SpectrumDescriptor desc{{1, 2, 1}};
  const auto v = enumerate_lattice(desc, 1000);
  ASSERT_EQ(v.size(), 45u);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  const std::set<FrequencyVector> all(v.begin(), v.end());
  EXPECT_EQ(all.size(), v.size());
  for (const auto& w : v) {
    EXPECT_TRUE(all.count(w.negated()));
    EXPECT_TRUE(w.within(desc));
  }
}

TEST(Enumerate, CapExceeded) {
  EXPECT_THROW(enumerate_lattice({std::vector<int>(13, 2)}, 1'000'000), CapExceeded);
}

TEST(Enumerate, CanonicalHalf) {
  const auto v = enumerate_canonical({{2, 2}}, 1000);
  EXPECT_EQ(v.size(), 12u);
  for (const auto& w : v) {
    EXPECT_TRUE(w.is_canonical());
    EXPECT_FALSE(w.is_zero());
  }
}

TEST(Sample, OnlyVectorInOneDim) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto v = sample_distinct({{1}}, 1, seed);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].components, std::vector<int>{1});
  }
}

TEST(Sample, ExhaustionReturnsAll) {
  const auto v = sample_distinct({{2, 2}}, 12, 3);
  const std::set<FrequencyVector> got(v.begin(), v.end());
  const auto all = enumerate_canonical({{2, 2}}, 1000);
  EXPECT_EQ(got, std::set<FrequencyVector>(all.begin(), all.end()));
}

TEST(Sample, DistinctCanonicalReproducible) {
  const SpectrumDescriptor desc{std::vector<int>(8, 2)};
  const auto a = sample_distinct(desc, 100, 42);
  EXPECT_EQ(a, sample_distinct(desc, 100, 42));
  EXPECT_NE(a, sample_distinct(desc, 100, 43));
  std::set<FrequencyVector> seen;
  for (const auto& w : a) {
    EXPECT_TRUE(w.is_canonical());
    EXPECT_FALSE(w.is_zero());
    EXPECT_TRUE(w.within(desc));
    EXPECT_TRUE(seen.insert(w).second);
  }
}

TEST(Sample, PrefixConsistent) {
  const SpectrumDescriptor desc{{3, 3, 3}};
  const auto big = sample_distinct(desc, 50, 9);
  const auto small = sample_distinct(desc, 20, 9);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin()));
}

TEST(Sample, TooMany) {
  EXPECT_THROW(sample_distinct({{2, 2}}, 13, 0), InsufficientSpectrum);
}

TEST(Sample, ContinuousWithinBox) {
  const SpectrumDescriptor desc{{1, 3}};
  const auto m = sample_continuous(desc, 200, 5);
  ASSERT_EQ(m.rows(), 200);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    EXPECT_LE(std::abs(m(r, 0)), 1.0);
    EXPECT_LE(std::abs(m(r, 1)), 3.0);
    EXPECT_TRUE(m(r, 0) > 0 || (m(r, 0) == 0 && m(r, 1) > 0));
  }
}

TEST(Grid, Nodes) {
  const auto g1 = full_grid({{1}}, 100);
  ASSERT_EQ(g1.points.rows(), 3);
  EXPECT_DOUBLE_EQ(g1.points(0, 0), 0.0);
  EXPECT_NEAR(g1.points(1, 0), 2 * pi / 3, 1e-15);
  EXPECT_NEAR(g1.points(2, 0), 4 * pi / 3, 1e-15);
  EXPECT_EQ(full_grid({{1, 1}}, 100).points.rows(), 9);
  const auto g5 = full_grid({{2}}, 100);
  ASSERT_EQ(g5.points.rows(), 5);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(g5.points(k, 0), 2 * pi * k / 5, 1e-15);
  EXPECT_THROW(full_grid({std::vector<int>(13, 2)}, 1'000'000), CapExceeded);
}

TEST(Grid, DftDesignIsWellConditioned) {
  for (int w = 0; w <= 4; ++w) {
    const SpectrumDescriptor desc{{w}};
    const auto grid = full_grid(desc, 100);
    const auto lat = enumerate_lattice(desc, 100);
    const auto a = surrogate::build_complex_design(grid.points, lat);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.entries);
    const auto& s = svd.singularValues();
    EXPECT_NEAR(s(0) / s(s.size() - 1), 1.0, 1e-10);
  }
}

TEST(SigmaP, ClosedFormMatchesEnumeration) {
  for (const auto& om : std::vector<std::vector<int>>{{1}, {2, 2}, {1, 3, 2}, {2, 2, 2, 2}}) {
    const SpectrumDescriptor desc{om};
    double acc = 0.0;
    const auto v = enumerate_canonical(desc, 100000);
    for (const auto& w : v) acc += w.squared_norm();
    EXPECT_NEAR(sigma_p(desc), std::sqrt(acc / v.size()), 1e-12);
  }
}

TEST(Frequency, JsonRoundTrip) {
  const FrequencyVector w{{1, -2, 0}};
  const nlohmann::json j = w;
  EXPECT_EQ(j.dump(), "[1,-2,0]");
  EXPECT_EQ(j.get<FrequencyVector>(), w);
}
