// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "corpusrefine/screen.hpp"
#include "support/oracles.hpp"

using namespace corpusrefine;

namespace {

const Objectives kMinMax = Objectives::orr();
const Objectives kAll[] = {{Direction::Minimize, Direction::Maximize},
                           {Direction::Maximize, Direction::Minimize},
                           {Direction::Minimize, Direction::Minimize},
                           {Direction::Maximize, Direction::Maximize}};

std::array<int, 2> dirs(const Objectives& o) {
  return {o.dielectric == Direction::Maximize ? 1 : -1, o.conductivity == Direction::Maximize ? 1 : -1};
}

std::vector<SimilarityPoint> random_points(std::mt19937_64& gen, std::size_t n, bool coarse) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<SimilarityPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && gen() % 10 == 0) {
      auto p = pts[gen() % pts.size()];
      p.composition = i;
      pts.push_back(p);
      continue;
    }
    double x = u(gen), y = u(gen);
    if (coarse) {
      x = std::round(x * 5) / 5;
      y = std::round(y * 5) / 5;
    }
    pts.push_back({x, y, i});
  }
  return pts;
}

std::vector<std::array<double, 2>> raw(const std::vector<SimilarityPoint>& pts) {
  std::vector<std::array<double, 2>> out;
  for (const auto& p : pts) out.push_back({p.s_dielectric, p.s_conductivity});
  return out;
}

std::vector<Composition> named(std::size_t n) {
  std::vector<Composition> cs(n);
  for (std::size_t i = 0; i < n; ++i) cs[i].id = "m" + std::to_string(i);
  return cs;
}

}  // namespace

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates({0.1, 0.9}, {0.2, 0.8}, kMinMax));
  EXPECT_FALSE(dominates({0.2, 0.8}, {0.1, 0.9}, kMinMax));
  EXPECT_FALSE(dominates({0.3, 0.3}, {0.3, 0.3}, kMinMax));
  EXPECT_FALSE(dominates({0.1, 0.8}, {0.2, 0.9}, kMinMax));
  EXPECT_FALSE(dominates({0.2, 0.9}, {0.1, 0.8}, kMinMax));
  EXPECT_TRUE(dominates({0.1, 0.9}, {0.1, 0.8}, kMinMax));
}

TEST(ParetoFront, CollinearSweepIsAllIncomparable) {
  EXPECT_EQ(pareto_front({{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}}, kMinMax), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ParetoFront, SinglePointAndEmpty) {
  EXPECT_EQ(pareto_front({{0.5, -0.5}}, kMinMax), std::vector<std::size_t>{0});
  EXPECT_THROW(pareto_front({}, kMinMax), DataError);
}

TEST(ParetoFront, DuplicatesOfAFrontPointAreAllKept) {
  std::vector<SimilarityPoint> pts{{0.1, 0.9}, {0.5, 0.5}, {0.1, 0.9}, {0.2, 0.95}, {0.1, 0.9}};
  EXPECT_EQ(pareto_front(pts, kMinMax), (std::vector<std::size_t>{0, 2, 3, 4}));
}

TEST(ParetoFront, MatchesBruteForceOracleForAllDirections) {
  std::mt19937_64 gen(61);
  for (bool coarse : {false, true}) {
    auto pts = random_points(gen, 1000, coarse);
    for (const auto& obj : kAll) EXPECT_EQ(pareto_front(pts, obj), oracle::brute_front(raw(pts), dirs(obj)));
  }
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = random_points(gen, 1 + gen() % 40, trial % 2 == 0);
    for (const auto& obj : kAll) EXPECT_EQ(pareto_front(pts, obj), oracle::brute_front(raw(pts), dirs(obj)));
  }
}

TEST(ParetoFront, NoMemberIsDominated) {
  std::mt19937_64 gen(67);
  auto pts = random_points(gen, 500, true);
  for (const auto& obj : kAll)
    for (auto i : pareto_front(pts, obj))
      for (const auto& q : pts) EXPECT_FALSE(dominates(q, pts[i], obj));
}

TEST(ParetoFront, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 gen(71);
  auto pts = random_points(gen, 400, false);
  auto up = [](double x) { return x * x * x + 2 * x; };
  auto down = [](double x) { return -std::exp(x); };
  for (const auto& obj : kAll) {
    auto base = pareto_front(pts, obj);
    auto t = pts;
    for (auto& p : t) {
      p.s_dielectric = up(p.s_dielectric);
      p.s_conductivity = up(p.s_conductivity);
    }
    EXPECT_EQ(pareto_front(t, obj), base);
    // A decreasing transform on one axis pairs with the flipped direction there.
    auto f = pts;
    for (auto& p : f) p.s_dielectric = down(p.s_dielectric);
    Objectives flipped = obj;
    flipped.dielectric = obj.dielectric == Direction::Minimize ? Direction::Maximize : Direction::Minimize;
    EXPECT_EQ(pareto_front(f, flipped), base);
  }
}

TEST(ParetoFront, AntiProblemIsTheFrontOfNegatedPoints) {
  std::mt19937_64 gen(73);
  auto pts = random_points(gen, 300, true);
  auto neg = pts;
  for (auto& p : neg) {
    p.s_dielectric = -p.s_dielectric;
    p.s_conductivity = -p.s_conductivity;
  }
  EXPECT_EQ(pareto_front(pts, Objectives::oer()), pareto_front(neg, Objectives::orr()));
}

TEST(ParetoFront, AntiProblemFrontsCanShareInteriorPoints) {
  // Increasing diagonal: every point is incomparable under both problems.
  std::vector<SimilarityPoint> pts{{0, 0}, {0.5, 0.5}, {1, 1}};
  EXPECT_EQ(pareto_front(pts, Objectives::orr()), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(pareto_front(pts, Objectives::oer()), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Objectives, Presets) {
  EXPECT_EQ(Objectives::preset("orr"), Objectives::orr());
  EXPECT_EQ(Objectives::preset("HER"), Objectives::orr());
  EXPECT_EQ(Objectives::preset("oer").dielectric, Direction::Maximize);
  EXPECT_EQ(Objectives::preset("oer").conductivity, Direction::Minimize);
  EXPECT_THROW(Objectives::preset("xyz"), ConfigError);
}

// ---- report ----

TEST(ScreenReport, CountsOnlyWithoutMeasurements) {
  auto cs = named(5);
  auto r = screen_report({1, 3}, cs);
  EXPECT_EQ(r.entries_total, 5u);
  EXPECT_EQ(r.front.size(), 2u);
  EXPECT_FALSE(r.max_current);
  MeasuredTable empty;
  auto r2 = screen_report({1, 3}, cs, &empty);
  EXPECT_FALSE(r2.min_current);
}

TEST(ScreenReport, SingleFrontMember) {
  auto cs = named(3);
  MeasuredTable m;
  m.current_density = {{"m0", 1.0}, {"m1", 4.25}, {"m2", 2.0}};
  auto r = screen_report({1}, cs, &m);
  EXPECT_EQ(*r.min_current, 4.25);
  EXPECT_EQ(*r.max_current, 4.25);
  EXPECT_EQ(r.measured_front, 1u);
}

TEST(ScreenReport, FrontHoldingTheBestCandidate) {
  auto cs = named(6);
  MeasuredTable m;
  m.current_density = {{"m0", 1.2}, {"m1", 6.90}, {"m2", 3.3}, {"m3", 0.4}, {"m4", 5.1}, {"m5", 2.2}};
  m.potential_mv = 800;
  auto r = screen_report({1, 2, 4}, cs, &m);
  EXPECT_EQ(*r.max_current, 6.90);
  EXPECT_EQ(*r.min_current, 3.3);
  EXPECT_EQ(*r.potential_mv, 800);
  auto [lo, hi] = measured_range(m);
  EXPECT_EQ(*lo, 0.4);
  EXPECT_EQ(*hi, 6.90);
}

TEST(ScreenReport, MissingRowsSkippedUnlessComplete) {
  auto cs = named(3);
  MeasuredTable m;
  m.current_density = {{"m0", 1.0}};
  auto r = screen_report({0, 2}, cs, &m);
  EXPECT_EQ(r.measured_front, 1u);
  m.complete = true;
  EXPECT_THROW(screen_report({0, 2}, cs, &m), DataError);
}

TEST(LoadMeasured, PotentialFilterAndErrors) {
  auto dir = oracle::temp_dir("screen");
  oracle::write_text(dir / "m.csv", "id,potential,current_density\na,800,1.5\na,900,2.5\nb,800,3.0\nc,800,\n");
  EXPECT_THROW(load_measured((dir / "m.csv").string()), DataError);
  auto at800 = load_measured((dir / "m.csv").string(), 800.0);
  EXPECT_EQ(at800.current_density.at("a"), 1.5);
  EXPECT_EQ(at800.current_density.at("b"), 3.0);
  oracle::write_text(dir / "bad.csv", "name,current_density\na,1\n");
  EXPECT_THROW(load_measured((dir / "bad.csv").string()), DataError);
  oracle::write_text(dir / "nan.csv", "id,current_density\na,abc\n");
  EXPECT_THROW(load_measured((dir / "nan.csv").string()), DataError);
}

TEST(ScreenTable, RoundTripsCoordinates) {
  auto cs = enumerate_simplex({"Ag", "Pd"}, 4);
  std::vector<SimilarityPoint> pts;
  for (std::size_t i = 0; i < cs.size(); ++i) pts.push_back({0.1 * static_cast<double>(i) - 0.2, 1.0 / 3.0, i});
  auto front = pareto_front(pts, kMinMax);
  MeasuredTable m;
  m.current_density[cs[0].id] = 2.5;
  auto dir = oracle::temp_dir("screen");
  oracle::write_text(dir / "s.csv", screen_csv(cs, pts, front, &m));
  auto t = load_screen_table((dir / "s.csv").string());
  ASSERT_EQ(t.ids.size(), cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(t.ids[i], cs[i].id);
    EXPECT_EQ(t.points[i].s_dielectric, pts[i].s_dielectric);
    EXPECT_EQ(t.points[i].s_conductivity, pts[i].s_conductivity);
  }
  auto table = csv::read((dir / "s.csv").string(), true);
  EXPECT_EQ(table.header, (csv::Row{"id", "Ag", "Pd", "s_dielectric", "s_conductivity", "on_front", "current_density"}));
  EXPECT_EQ(table.rows[0][5], "1");
  EXPECT_EQ(table.rows[0][6], "2.5");
  EXPECT_EQ(table.rows[1][6], "");
}
