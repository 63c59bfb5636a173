#include "itn/io.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "itn/error.hpp"
#include "test_util.hpp"

namespace itn {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("itn_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(IoTest, SnapshotRoundTripIsBitExact) {
  const auto s = testing::random_snapshot(25, 11, 0.4, 1995);
  io::write_snapshot(dir_, s);
  const auto r = io::read_snapshot(dir_, 1995);
  EXPECT_EQ(r.year(), 1995);
  EXPECT_EQ(r.countries(), s.countries());
  ASSERT_EQ(r.weights().nonZeros(), s.weights().nonZeros());
  EXPECT_TRUE(r.gdp() == s.gdp());
  EXPECT_EQ(Eigen::MatrixXd(r.weights()), Eigen::MatrixXd(s.weights()));
  EXPECT_EQ(r.total_trade(), s.total_trade());
}

TEST_F(IoTest, ParamsRoundTripIsBitExact) {
  const auto p = fit_params(testing::random_snapshot(12, 3, 0.7, 2001));
  io::write_params(dir_, p);
  const auto r = io::read_params(dir_, 2001);
  EXPECT_EQ(r.year, 2001);
  EXPECT_EQ(r.countries, p.countries);
  EXPECT_TRUE(r.gdp == p.gdp);
  EXPECT_TRUE(r.theta == p.theta);
  EXPECT_EQ(r.total_trade, p.total_trade);
  EXPECT_EQ(r.total_gdp, p.total_gdp);
}

TEST_F(IoTest, SampleRoundTripIsBitExact) {
  const auto p = fit_params(testing::random_snapshot(9, 4));
  const auto g = sample_direct(p, 99);
  const auto path = io::sample_path(dir_, 2000, 99);
  EXPECT_EQ(path.filename(), "sample-2000-99.csv");
  io::write_sample(path, g);
  EXPECT_EQ(io::read_sample(path, 9), g.weights);
}

TEST_F(IoTest, MetadataIsReadBack) {
  {
    io::CsvWriter w(dir_ / "t.csv", {{"year", "1990"}, {"seed", "7"}}, "a,b");
    w.row(1, 0.1);
    w.row(2, std::string("x"));
    w.close();
  }
  const auto t = io::read_table(dir_ / "t.csv", "a,b");
  EXPECT_EQ(t.meta("year"), "1990");
  EXPECT_EQ(t.meta("seed"), "7");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "0.1");
  EXPECT_EQ(t.rows[1][1], "x");
}

TEST_F(IoTest, HeaderMismatch) {
  std::ofstream(dir_ / "t.csv") << "a,c\n1,2\n";
  EXPECT_THROW(io::read_table(dir_ / "t.csv", "a,b"), FormatError);
}

TEST_F(IoTest, MissingFilesNameTheYear) {
  try {
    io::read_snapshot(dir_, 1977);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("1977"), std::string::npos);
  }
  EXPECT_THROW(io::read_params(dir_, 1977), DataError);
  EXPECT_THROW(io::read_table(dir_ / "nope.csv", "a"), DataError);
}

TEST_F(IoTest, ChainFile) {
  io::write_chain(io::chain_path(dir_, 1990), {1.5, 2.25, 3.0});
  const auto t = io::read_table(io::chain_path(dir_, 1990), "sweep,H");
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][0], "0");
  EXPECT_EQ(t.rows[1][1], "2.25");
}

}  // namespace
}  // namespace itn
