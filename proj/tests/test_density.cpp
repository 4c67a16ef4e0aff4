#include <gtest/gtest.h>

#include <sstream>

#include "idcubic/density.hpp"

using namespace idc;

TEST(Density, InvertibleAlwaysProper) {
  const auto s = density_experiment(3, 3, 100, 5);
  EXPECT_EQ(s.proper, 100u);
  EXPECT_EQ(s.reasons.at("Thm1.1"), 100u);
}

TEST(Density, SmallDimensionsAllProper) {
  for (std::size_t r = 0; r <= 2; ++r) {
    const auto s = density_experiment(2, r, 60, 11 + r);
    EXPECT_EQ(s.proper, 60u) << "r=" << r;
  }
  EXPECT_EQ(density_experiment(1, 1, 20, 3).proper, 20u);
}

TEST(Density, Rank2In3IsMostlyProper) {
  const auto s = density_experiment(3, 2, 200, 7);
  EXPECT_EQ(s.proper + s.nonproper + s.undecided, 200u);
  EXPECT_GT(s.proper, 100u);
  std::cout << density_table(s);
}

TEST(Density, RankOneUsesSecondCondition) {
  const auto s = density_experiment(3, 1, 50, 9);
  EXPECT_EQ(s.proper, 50u);
  EXPECT_EQ(s.reasons.at("Thm1.2"), 50u);
}

TEST(Density, CsvIsReproducible) {
  std::ostringstream a, b;
  write_density_csv(a, density_experiment(3, 2, 20, 42), false);
  write_density_csv(b, density_experiment(3, 2, 20, 42), false);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "seed,m,r,verdict,reason,millis");
  std::size_t lines = 0;
  for (char c : a.str()) lines += c == '\n';
  EXPECT_EQ(lines, 21u);
}

TEST(Density, RejectsBadArguments) {
  EXPECT_THROW(density_experiment(3, 2, 0, 1), DomainError);
  EXPECT_THROW(density_experiment(3, 4, 5, 1), DomainError);
}
