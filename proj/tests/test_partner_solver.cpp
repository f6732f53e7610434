#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "qgrade/partner_solver.hpp"

using namespace qgrade;

TEST(PartnerTest, UnitParameter) {
  const PartnerSet set = solve_partners(QParam::make(1.0));
  ASSERT_EQ(set.count(), 2u);
  EXPECT_EQ(set.solutions[0].p, 0);
  EXPECT_TRUE(set.solutions[0].trivial);
  EXPECT_EQ(set.solutions[1].p, 1);
  EXPECT_EQ(set.solutions[1].qbar.value(), cplx(-1.0, 0.0));
  EXPECT_EQ(set.nontrivial_count(), 1u);
  EXPECT_EQ(set.boundary_excluded, std::vector<long>{2});
}

TEST(PartnerTest, FigureOne) {
  const PartnerSet set = solve_partners(QParam::from_polar_pi(1.0, 0.25));
  ASSERT_EQ(set.count(), 3u);
  EXPECT_TRUE(set.solutions[0].trivial);
  EXPECT_EQ(set.solutions[1].p, 2);
  EXPECT_NEAR(set.solutions[1].k_value, pi * std::pow(std::sqrt(2.0) - 0.5, 2), 1e-12);
  EXPECT_EQ(set.solutions[2].p, 3);
  EXPECT_NEAR(set.solutions[2].k_value, pi * std::pow(std::sqrt(3.0) - 0.5, 2), 1e-12);
  for (const auto& s : set.solutions) EXPECT_DOUBLE_EQ(s.qbar.modulus(), 1.0);
}

TEST(PartnerTest, FigureTwo) {
  const PartnerSet set = solve_partners(QParam::from_polar_pi(0.5, 1.8));
  ASSERT_EQ(set.count(), 7u);
  for (long p = 1; p <= 7; ++p) {
    const auto& s = set.solutions[static_cast<std::size_t>(p - 1)];
    EXPECT_EQ(s.p, p);
    EXPECT_FALSE(s.trivial);
    EXPECT_EQ(s.qbar.modulus(), 2.0);
    EXPECT_NEAR(s.k_value, pi * std::pow(std::sqrt(static_cast<double>(p)) - std::sqrt(1.8), 2), 1e-12);
    EXPECT_EQ(s.closes, p >= 2);
  }
}

TEST(PartnerTest, InvariantsAgainstBruteForce) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> r(0.1, 3.0);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const QParam q = QParam::from_polar_pi(r(rng), t(rng));
    const PartnerSet set = solve_partners(q);
    const auto want = oracle::partners(q.phase());
    ASSERT_EQ(set.count(), want.size());
    for (std::size_t j = 0; j < want.size(); ++j) {
      const auto& s = set.solutions[j];
      EXPECT_EQ(s.p, want[j].p);
      EXPECT_NEAR(s.k_value, want[j].k, 1e-12);
      EXPECT_GE(s.k_value, 0.0);
      EXPECT_LT(s.k_value, 2 * pi);
      EXPECT_NEAR(s.qbar.modulus() * q.modulus(), 1.0, 1e-15);
      if (s.closes) {
        const double d = std::sqrt(q.phase_over_pi()) + std::sqrt(s.k_value / pi);
        EXPECT_NEAR(d * d, static_cast<double>(s.p), 1e-9);
      }
      if (q.modulus() < 1.0) {
        EXPECT_GT(s.qbar.modulus(), 1.0);
      }
    }
  }
}

TEST(PartnerTest, SpecialPhasesHaveTrivialSolution) {
  for (int j = 0; j < 8; ++j) {
    const QParam q = QParam::from_polar_pi(1.0, 0.25 * j);
    const PartnerSet set = solve_partners(q);
    bool found = false;
    for (const auto& s : set.solutions)
      if (s.trivial) {
        found = true;
        EXPECT_EQ(s.p, j);
        EXPECT_EQ(s.qbar, q);
      }
    EXPECT_TRUE(found) << j;
  }
}

TEST(PartnerTest, ZeroHasNoPartners) { EXPECT_THROW(solve_partners(QParam::make(0.0)), zero_parameter); }

TEST(PartnerTest, Breakpoints) {
  for (long p = 3; p <= 7; ++p) {
    const double b = partner_breakpoint(p);
    auto has = [&](double phi) {
      for (const auto& s : solve_partners(QParam::from_polar(1.0, phi)).solutions)
        if (s.p == p) return true;
      return false;
    };
    EXPECT_FALSE(has(b - 1e-9)) << p;
    EXPECT_TRUE(has(b + 1e-9)) << p;
  }
}

TEST(PartnerTest, CountProfile) {
  const CountProfile prof = partner_count_profile(10000);
  EXPECT_EQ(prof.samples.size(), 10000u);
  EXPECT_EQ(prof.min_count, 2u);
  EXPECT_EQ(prof.max_count, 7u);
  EXPECT_EQ(prof.samples[0].ps, (std::vector<long>{0, 1}));
  ASSERT_EQ(prof.breakpoints.size(), 5u);
  for (std::size_t i = 1; i < prof.breakpoints.size(); ++i) EXPECT_GT(prof.breakpoints[i].second, prof.breakpoints[i - 1].second);
  EXPECT_THROW(partner_count_profile(0), error);
}

TEST(PartnerTest, ExtendedPhasesAreLabelled) {
  PartnerOptions opt;
  opt.max_phase = 6 * pi;
  const PartnerSet set = solve_partners(QParam::make(1.0), opt);
  std::size_t experimental = 0;
  for (const auto& s : set.solutions) {
    experimental += s.experimental ? 1 : 0;
    EXPECT_EQ(s.experimental, s.k_value >= 2 * pi - 1e-12);
  }
  EXPECT_GT(experimental, 0u);
  EXPECT_GT(set.count(), solve_partners(QParam::make(1.0)).count());
}

TEST(PartnerTest, EmitFigureData) {
  const std::string path = ::testing::TempDir() + "fig2.json";
  emit_figure_data(QParam::from_polar_pi(0.5, 1.8), path, FigureFormat::json);
  std::ifstream f(path);
  const nlohmann::json j = nlohmann::json::parse(f);
  ASSERT_EQ(j["solutions"].size(), 7u);
  for (const auto& s : j["solutions"]) EXPECT_NEAR(s["modulus"].get<double>(), 2.0, 1e-15);
  EXPECT_NEAR(j["input_q"]["modulus"].get<double>(), 0.5, 1e-15);
  std::remove(path.c_str());

  const std::string csv = ::testing::TempDir() + "fig1.csv";
  emit_figure_data(QParam::from_polar_pi(1.0, 0.25), csv);
  std::ifstream c(csv);
  std::string line;
  int rows = 0;
  while (std::getline(c, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'p') continue;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  std::remove(csv.c_str());
  EXPECT_THROW(emit_figure_data(QParam::make(1.0), "/nonexistent-dir/x.csv"), io_failure);
}
