#include <gtest/gtest.h>

#include <sstream>

#include "ozrisk/chart.hpp"
#include "ozrisk/sweep.hpp"
#include "test_support.hpp"

using namespace ozrisk;

namespace {

SweepSpec tiny_spec(std::vector<SweptTerm> terms) {
  SweepSpec spec;
  spec.base.er = ozrisk::testing::mss2013();
  spec.base.season = Season::parse("2017-07-01:2017-07-10");
  spec.base.scenario = zero_ozone_scenario(spec.base.season);
  spec.base.n_persons = 400;
  spec.base.master_seed = 5;
  spec.terms = std::move(terms);
  spec.grid = {0.0, 2.0, 3.0, 4.0};
  return spec;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(BoundGrid, InclusiveEnds) {
  const auto g = bound_grid(0.0, 4.0, 0.5);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 4.0);
  EXPECT_EQ(bound_grid(0.0, 1.0, 0.1).size(), 11u);
  EXPECT_THROW(bound_grid(0.0, 1.0, 0.0), ConfigError);
  EXPECT_THROW(bound_grid(2.0, 1.0, 0.5), ConfigError);
}

TEST(SweepSpec, Validation) {
  auto spec = tiny_spec({SweptTerm::Nu2});
  EXPECT_NO_THROW(spec.validate());
  spec.base.er = ozrisk::testing::mss2012();
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = tiny_spec({});
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = tiny_spec({SweptTerm::U, SweptTerm::U});
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = tiny_spec({SweptTerm::U});
  spec.grid = {1.0, -1.0};
  EXPECT_THROW(spec.validate(), ConfigError);
  EXPECT_THROW(parse_swept_term("nu3"), ConfigError);
}

TEST(SweepCells, OrderAndFixedBounds) {
  auto spec = tiny_spec({SweptTerm::Nu1});
  const auto cells = sweep_cells(spec);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0].redraw, Redraw::Daily);
  EXPECT_EQ(cells[4].redraw, Redraw::Hourly);
  EXPECT_EQ(cells[2].bound_nu1, 3.0);
  EXPECT_EQ(cells[2].bound_u, 2.0);
  EXPECT_EQ(cells[2].bound_nu2, 2.0);

  spec = tiny_spec({SweptTerm::Nu1, SweptTerm::Nu2});
  spec.frequencies = {Redraw::Hourly};
  const auto joint = sweep_cells(spec);
  ASSERT_EQ(joint.size(), 16u);
  EXPECT_EQ(joint[1].bound_nu1, 0.0);
  EXPECT_EQ(joint[1].bound_nu2, 2.0);
  EXPECT_EQ(joint[4].bound_nu1, 2.0);
  EXPECT_EQ(joint[4].bound_nu2, 0.0);
  EXPECT_EQ(spec.term_label(), "nu1+nu2");
}

TEST(RunSweep, ZeroOzoneNu1SweepIsMonotoneAndZeroInsideBound) {
  const auto spec = tiny_spec({SweptTerm::Nu1});
  const auto res = run_sweep(spec, 2);
  ASSERT_EQ(res.rows.size(), 8u);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    ASSERT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(r.n_total, 400u);
    // 10% needs more than 10/3.02 = 3.3 sd of nu1.
    if (r.bound_nu1 <= 3.0) {
      EXPECT_EQ(r.n_exceed, 0u);
    }
    // Common random numbers make the count monotone in the bound.
    if (i % 4 != 0) {
      EXPECT_GE(r.n_exceed, res.rows[i - 1].n_exceed);
    }
  }
  EXPECT_GT(res.rows[7].n_exceed, res.rows[3].n_exceed);  // hourly above daily at b=4
}

TEST(RunSweep, FailingCellRecordedAndSweepContinues) {
  auto spec = tiny_spec({SweptTerm::Nu1});
  spec.grid = {1e-12, 2.0};
  spec.frequencies = {Redraw::Daily};
  spec.base.n_persons = 3;
  const auto res = run_sweep(spec, 1);
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_FALSE(res.rows[0].error.empty());
  EXPECT_TRUE(res.rows[1].error.empty());
  std::ostringstream os;
  write_sweep_csv(os, res);
  EXPECT_NE(os.str().find(",daily,NA,"), std::string::npos);
}

TEST(SweepCsv, HeaderAndRows) {
  SweepResult res{{SweptTerm::U}, {}};
  SweepRow row;
  row.term = "u";
  row.bound_u = 1.5;
  row.bound_nu1 = 2.0;
  row.bound_nu2 = kUnbounded;
  row.frequency = Redraw::Hourly;
  row.risk_pct = 12.3456789;
  row.n_exceed = 123;
  row.n_total = 1000;
  row.master_seed = 42;
  res.rows.push_back(row);
  std::ostringstream os;
  write_sweep_csv(os, res);
  EXPECT_EQ(os.str(), std::string(kSweepCsvHeader) + "\nu,1.5,2,inf,hourly,12.3457,123,1000,42\n");
}

TEST(SweepChart, SeriesAndDefaultMarker) {
  SweepResult res{{SweptTerm::Nu1}, {}};
  for (Redraw f : {Redraw::Daily, Redraw::Hourly})
    for (double b : {0.0, 1.0, 2.0, 3.0}) {
      SweepRow r;
      r.term = "nu1";
      r.bound_nu1 = b;
      r.frequency = f;
      r.risk_pct = b * (f == Redraw::Daily ? 5.0 : 9.0);
      res.rows.push_back(r);
    }
  std::ostringstream os;
  write_sweep_svg(os, res);
  const std::string svg = os.str();
  EXPECT_EQ(count(svg, "class=\"series\""), 2u);
  EXPECT_EQ(count(svg, "data-frequency=\"daily\""), 1u);
  EXPECT_EQ(count(svg, "data-frequency=\"hourly\""), 1u);
  EXPECT_EQ(count(svg, "class=\"default-marker\""), 1u);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);

  SweepResult joint{{SweptTerm::Nu1, SweptTerm::Nu2}, {}};
  std::ostringstream os2;
  EXPECT_THROW(write_sweep_svg(os2, joint), ConfigError);
}
