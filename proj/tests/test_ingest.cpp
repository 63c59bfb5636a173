#include "itn/ingest.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "itn/error.hpp"
#include "test_util.hpp"

namespace itn {
namespace {

std::vector<FlowRecord> flows(const std::string& body) {
  std::istringstream in(std::string(kFlowsHeader) + "\n" + body);
  return parse_flows(in);
}

std::vector<GdpRecord> gdps(const std::string& body) {
  std::istringstream in(std::string(kGdpHeader) + "\n" + body);
  return parse_gdp(in);
}

TEST(ParseFlows, MapsFields) {
  const auto r = flows("1975,USA,CAN,25000.0,24980.0\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (FlowRecord{1975, "USA", "CAN", 25000.0, 24980.0}));
}

TEST(ParseFlows, EmptyImportIsAbsent) {
  const auto r = flows("1975,USA,CAN,25000.0,\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_FALSE(r[0].reported_import.has_value());
  EXPECT_EQ(r[0].reported_export, 25000.0);
}

TEST(ParseFlows, RejectsSelfFlow) { EXPECT_THROW(flows("1975,USA,USA,10.0,10.0\n"), ValueError); }

TEST(ParseFlows, RejectsNegativeWithRowContext) {
  try {
    flows("1975,USA,CAN,1.0,\n1975,CAN,USA,-3.0,\n");
    FAIL() << "expected ValueError";
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseFlows, RejectsUnparseableNumberWithRow) {
  try {
    flows("1975,USA,CAN,abc,\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ParseFlows, RejectsMalformedHeader) {
  std::istringstream in("year,from,to,value\n1975,USA,CAN,1,\n");
  EXPECT_THROW(parse_flows(in), FormatError);
}

TEST(ParseFlows, RejectsWrongFieldCount) { EXPECT_THROW(flows("1975,USA,CAN,1\n"), FormatError); }

TEST(ParseFlows, RejectsDuplicateKey) { EXPECT_THROW(flows("1975,USA,CAN,1,\n1975,USA,CAN,2,\n"), ValueError); }

TEST(ParseFlows, ToleratesCrlfAndComments) {
  std::istringstream in(std::string(kFlowsHeader) + "\r\n# note\r\n1975,USA,CAN,1,2\r\n");
  EXPECT_EQ(parse_flows(in).size(), 1u);
}

TEST(ParseGdp, ComputesTotalInMillions) {
  const auto r = gdps("1975,USA,7500.0,216000000\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r[0].total_musd(), 7500.0 * 216.0);
}

TEST(ParseGdp, RejectsNonpositive) {
  EXPECT_THROW(gdps("1975,XYZ,0,1000\n"), ValueError);
  EXPECT_THROW(gdps("1975,XYZ,10,-1\n"), ValueError);
}

TEST(ParseGdp, RejectsDuplicateKey) {
  EXPECT_THROW(gdps("1975,USA,1,1\n1975,USA,2,2\n"), ValueError);
  EXPECT_NO_THROW(gdps("1975,USA,1,1\n1976,USA,2,2\n"));
}

TEST(BuildSnapshot, AveragesBothReports) {
  const auto g = gdps("1975,A,1,1000000\n1975,B,1,1000000\n");
  const auto f = flows("1975,A,B,10,8\n");
  const auto s = build_snapshot(1975, f, g).snapshot;
  EXPECT_EQ(s.weights().coeff(0, 1), 9.0);
}

TEST(BuildSnapshot, SingleReportUsedDirectly) {
  const auto g = gdps("1975,A,1,1000000\n1975,B,1,1000000\n");
  const auto s = build_snapshot(1975, flows("1975,A,B,10,\n"), g).snapshot;
  EXPECT_EQ(s.weights().coeff(0, 1), 10.0);
  EXPECT_EQ(s.weights().coeff(1, 0), 0.0);
}

TEST(BuildSnapshot, Totals) {
  const auto g = gdps("1975,A,1,1000000\n1975,B,2,1000000\n1975,C,3,1000000\n");
  const auto f = flows("1975,A,B,2,\n1975,B,A,1,\n1975,A,C,3,\n");
  const auto s = build_snapshot(1975, f, g).snapshot;
  EXPECT_EQ(s.size(), 3);
  EXPECT_EQ(s.total_trade(), 6.0);
  EXPECT_EQ(s.total_gdp(), 6.0);
}

TEST(BuildSnapshot, DropsTradersWithoutGdpKeepsNonTraders) {
  const auto g = gdps("1975,A,1,1000000\n1975,B,1,1000000\n1975,Z,5,1000000\n");
  const auto f = flows("1975,A,B,1,\n1975,A,Q,7,\n1975,Q,B,3,\n1974,A,B,100,\n");
  const auto built = build_snapshot(1975, f, g);
  EXPECT_EQ(built.dropped, std::vector<std::string>{"Q"});
  EXPECT_EQ(built.snapshot.countries(), (std::vector<std::string>{"A", "B", "Z"}));
  EXPECT_EQ(built.snapshot.total_trade(), 1.0);
  EXPECT_EQ(built.snapshot.total_gdp(), 7.0);
}

TEST(BuildSnapshot, EmptyCountrySetIsAnError) {
  const auto g = gdps("1974,A,1,1\n");
  EXPECT_THROW(build_snapshot(1975, flows("1975,A,B,1,\n"), g), DataError);
}

TEST(Snapshot, RejectsSelfLoopAndNegative) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 0) = 1.0;
  EXPECT_THROW(testing::dense_snapshot(w, Eigen::Vector2d(1, 1)), ValueError);
  w(0, 0) = 0.0;
  w(0, 1) = -1.0;
  EXPECT_THROW(testing::dense_snapshot(w, Eigen::Vector2d(1, 1)), ValueError);
  EXPECT_THROW(testing::dense_snapshot(Eigen::MatrixXd::Zero(2, 2), Eigen::Vector2d(1, 0)), ValueError);
}

TEST(RelativeView, EqualGdpsGiveEqualShares) {
  Eigen::MatrixXd w(2, 2);
  w << 0, 3, 1, 0;
  const auto v = relative_view(testing::dense_snapshot(w, Eigen::Vector2d(1, 1)));
  EXPECT_EQ(v.xi, Eigen::Vector2d(0.5, 0.5));
  EXPECT_EQ(v.v.coeff(0, 1), 0.75);
  EXPECT_EQ(v.sigma_out[0], 0.75);
  EXPECT_EQ(v.sigma_in[0], 0.25);
}

TEST(RelativeView, DegenerateSnapshot) {
  EXPECT_THROW(relative_view(testing::dense_snapshot(Eigen::MatrixXd::Zero(2, 2), Eigen::Vector2d(1, 1))),
               DataError);
}

class SnapshotProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SnapshotProperties, TotalsRecompute) {
  const auto s = testing::random_snapshot(60, GetParam());
  double x = 0.0, t = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) x += s.gdp()[i];
  for (Eigen::Index i = 0; i < s.size(); ++i) t += s.out_strength()[i];
  EXPECT_NEAR(s.total_gdp(), x, 1e-12 * x);
  EXPECT_NEAR(s.total_trade(), t, 1e-12 * t);
}

TEST_P(SnapshotProperties, RelativeSumsAreOne) {
  const auto v = relative_view(testing::random_snapshot(60, GetParam()));
  EXPECT_NEAR(v.xi.sum(), 1.0, 1e-12);
  EXPECT_NEAR(v.sigma_out.sum(), 1.0, 1e-12);
  EXPECT_NEAR(v.sigma_in.sum(), 1.0, 1e-12);
  EXPECT_NEAR(v.v.sum(), 1.0, 1e-12);
  for (Eigen::Index i = 0; i < v.v.outerSize(); ++i) {
    double row = 0.0;
    for (WeightMatrix::InnerIterator it(v.v, i); it; ++it) row += it.value();
    EXPECT_EQ(row, v.sigma_out[i]);
  }
}

TEST_P(SnapshotProperties, RebuildIsBitIdentical) {
  const auto s = testing::random_snapshot(40, GetParam());
  const auto f = to_flow_records(s);
  const auto g = to_gdp_records(s);
  const auto r = build_snapshot(s.year(), f, g);
  EXPECT_TRUE(r.dropped.empty());
  EXPECT_EQ(r.snapshot.countries(), s.countries());
  EXPECT_EQ(r.snapshot.gdp(), s.gdp());
  EXPECT_TRUE(r.snapshot.weights().isApprox(s.weights(), 0.0));
  EXPECT_EQ(Eigen::MatrixXd(r.snapshot.weights()), Eigen::MatrixXd(s.weights()));
  EXPECT_EQ(r.snapshot.total_trade(), s.total_trade());
}

TEST_P(SnapshotProperties, DroppingZeroTradeCountry) {
  // Integer-valued data so sums are exact.
  std::mt19937_64 rng(GetParam());
  std::uniform_int_distribution<int> value(1, 1000);
  std::vector<FlowRecord> f;
  std::vector<GdpRecord> g;
  for (int i = 0; i < 12; ++i) {
    g.push_back({2000, testing::code(i), static_cast<double>(value(rng)), 1e6});
    for (int j = 0; j < 11; ++j)
      if (i != j && i < 11 && value(rng) % 2 == 0) f.push_back({2000, testing::code(i), testing::code(j), double(value(rng)), {}});
  }
  const auto with = build_snapshot(2000, f, g).snapshot;
  auto g2 = g;
  g2.pop_back();  // code(11) never trades
  const auto without = build_snapshot(2000, f, g2).snapshot;
  EXPECT_EQ(with.total_trade(), without.total_trade());
  EXPECT_EQ(with.total_gdp() - without.total_gdp(), g.back().total_musd());
}

INSTANTIATE_TEST_SUITE_P(Seeds, SnapshotProperties, ::testing::Values(1u, 2u, 3u, 17u, 99u));

}  // namespace
}  // namespace itn
