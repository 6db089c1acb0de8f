#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "factorbreak/error.hpp"
#include "factorbreak/panel.hpp"
#include "factorbreak/rng.hpp"

using namespace factorbreak;

namespace {

PanelData parse(const std::string& text, const IngestOptions& opts = {}) {
  std::istringstream in(text);
  return read_csv(in, opts);
}

}  // namespace

TEST(LoadCsv, PlainPanelWithoutTimeColumn) {
  const PanelData p = parse("a,b\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(p.T(), 3);
  EXPECT_EQ(p.N(), 2);
  EXPECT_EQ(p.time_labels(), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(p.series_ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(p.values()(2, 1), 6.0);
}

TEST(LoadCsv, DropsColumnWithMissingCell) {
  const PanelData p = parse("a,b,c\n1,2,3\n4,,6\n7,8,9\n1,2,3\n4,5,6\n");
  EXPECT_EQ(p.T(), 5);
  EXPECT_EQ(p.N(), 2);
  EXPECT_EQ(p.series_ids(), (std::vector<std::string>{"a", "c"}));
}

TEST(LoadCsv, NaTokensAreCaseInsensitive) {
  const PanelData p = parse("a,b,c,d\n1,NA,nan,1\n2,3,4,2\n");
  EXPECT_EQ(p.series_ids(), (std::vector<std::string>{"a", "d"}));
  EXPECT_TRUE(is_na_token(" NaN "));
  EXPECT_TRUE(is_na_token(""));
  EXPECT_FALSE(is_na_token("0"));
}

TEST(LoadCsv, MissingValueIsErrorWhenNotDropping) {
  IngestOptions opts;
  opts.drop_incomplete_columns = false;
  EXPECT_THROW(parse("a,b\n1,\n2,3\n", opts), InputError);
}

TEST(LoadCsv, FredMdLayout) {
  // Date column, a transform-code row, 127 complete series and 3 with gaps.
  std::ostringstream os;
  os << "sasdate";
  for (int j = 0; j < 130; ++j) os << ",S" << j;
  os << "\nTransform:";
  for (int j = 0; j < 130; ++j) os << ',' << (j % 7 + 1);
  os << '\n';
  Rng rng(3);
  for (int t = 0; t < 240; ++t) {
    os << (t % 12 + 1) << "/1/" << (2003 + t / 12);
    for (int j = 0; j < 130; ++j) {
      if (j >= 127 && t == 17 * (j - 126)) os << ',';
      else os << ',' << rng.normal() * 1e3;
    }
    os << '\n';
  }
  const PanelData p = parse(os.str());
  EXPECT_EQ(p.T(), 240);
  EXPECT_EQ(p.N(), 127);
  EXPECT_EQ(p.time_labels().front(), "1/1/2003");
}

TEST(LoadCsv, LabelWindow) {
  IngestOptions opts;
  opts.first_label = "2001";
  opts.last_label = "2003";
  const PanelData p = parse("year,x,y\n2000,,1\n2001,1,2\n2002,3,4\n2003,5,6\n2004,7,8\n", opts);
  EXPECT_EQ(p.T(), 3);
  EXPECT_EQ(p.N(), 2);  // the gap in x lies outside the window
  EXPECT_EQ(p.time_labels().front(), "2001");
}

TEST(LoadCsv, ScientificNotationAndQuotes) {
  const PanelData p = parse("\"a\",b\r\n1e-3,-2.5E+2\r\n+4,\"5\"\r\n");
  EXPECT_EQ(p.values()(0, 0), 1e-3);
  EXPECT_EQ(p.values()(0, 1), -250.0);
  EXPECT_EQ(p.values()(1, 0), 4.0);
  EXPECT_EQ(p.values()(1, 1), 5.0);
}

TEST(LoadCsv, Errors) {
  EXPECT_THROW(parse("a,b\n1,2\n3\n"), InputError);            // ragged
  EXPECT_THROW(parse("a,b\n1,2\n3,x\n", {.time_column = TimeColumn::kNone}), InputError);
  EXPECT_THROW(parse("a,b\n1,\n,4\n"), InputError);            // nothing usable
  EXPECT_THROW(parse(""), InputError);                          // no header
  EXPECT_THROW(load_csv("/nonexistent/panel.csv"), InputError);
}

TEST(LoadCsv, RoundTripIsBitIdentical) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x(6, 4);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      x(k) = rng.normal() * std::pow(10.0, std::floor(40.0 * rng.uniform() - 20.0));
    }
    const PanelData p = PanelData::from_matrix(x);
    std::stringstream buf;
    write_csv(p, buf);
    const PanelData q = read_csv(buf);
    ASSERT_EQ(q.series_ids(), p.series_ids());
    ASSERT_EQ(q.time_labels(), p.time_labels());
    for (Eigen::Index k = 0; k < x.size(); ++k) ASSERT_EQ(q.values()(k), x(k));
  }
}

TEST(LoadCsv, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "factorbreak_panel_rt.csv";
  Eigen::MatrixXd x(3, 2);
  x << 0.1, 0.2, 1.0 / 3.0, -7.0, 1e300, 5e-324;
  write_csv(PanelData::from_matrix(x), path);
  const PanelData p = load_csv(path);
  EXPECT_EQ(p.values(), x);
  std::filesystem::remove(path);
}

TEST(PanelData, Invariants) {
  EXPECT_THROW(PanelData::from_matrix(Eigen::MatrixXd::Zero(1, 3)), InputError);
  EXPECT_THROW(PanelData::from_matrix(Eigen::MatrixXd::Zero(3, 0)), InputError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 2);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(PanelData::from_matrix(bad), InputError);
  EXPECT_THROW(PanelData(Eigen::MatrixXd::Zero(2, 2), {"1", "2"}, {"a", "a"}), InputError);
  EXPECT_THROW(PanelData(Eigen::MatrixXd::Zero(2, 2), {"1"}, {"a", "b"}), InputError);
}

TEST(Standardize, HandExample) {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  const PanelData z = standardize(PanelData::from_matrix(x));
  EXPECT_NEAR(z.values()(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(z.values()(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(z.values()(2, 0), 1.0, 1e-15);
}

TEST(Standardize, ConstantSeriesNamed) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  try {
    standardize(PanelData::from_matrix(x));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("x2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("constant series"), std::string::npos);
  }
}

TEST(Standardize, IdempotentAndPermutationEquivariant) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x(15, 5);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = 3.0 + 10.0 * rng.normal();
    const PanelData z = standardize(PanelData::from_matrix(x));
    for (Eigen::Index i = 0; i < 5; ++i) {
      ASSERT_NEAR(z.values().col(i).mean(), 0.0, 1e-12);
      ASSERT_NEAR(z.values().col(i).squaredNorm() / 14.0, 1.0, 1e-12);
    }
    const PanelData zz = standardize(z);
    ASSERT_LT((zz.values() - z.values()).cwiseAbs().maxCoeff(), 1e-12);

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
    perm.indices() << 3, 0, 4, 1, 2;
    const PanelData zp = standardize(PanelData::from_matrix(x * perm));
    ASSERT_LT((zp.values() - z.values() * perm).cwiseAbs().maxCoeff(), 1e-12);
  }
}
