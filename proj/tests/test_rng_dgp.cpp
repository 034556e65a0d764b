#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ikwsms/dgp.hpp"
#include "ikwsms/errors.hpp"
#include "ikwsms/rng.hpp"

using namespace ikwsms;

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(Philox, KnownAnswerZero) {
  const PhiloxCounter out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const PhiloxCounter out =
      philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const PhiloxCounter out =
      philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(RandomStream, AddressDeterminesSequence) {
  RandomStream a(11, 3, StreamTag::data), b(11, 3, StreamTag::data);
  RandomStream c(11, 3, StreamTag::bootstrap), d(11, 4, StreamTag::data), e(12, 3, StreamTag::data);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
    EXPECT_NE(x, e());
  }
}

TEST(RandomStream, UniformOpenInterval) {
  RandomStream s(1);
  double sum = 0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / m, 0.5, 3 * std::sqrt(1.0 / 12 / m));
}

TEST(RandomStream, BelowIsUniform) {
  // Ten streams pooled: the summed statistic is chi-square with 60 df, whose
  // 0.999 quantile is 99.61.
  double chi = 0;
  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    RandomStream s(2, stream);
    std::vector<int> counts(7, 0);
    const int m = 70000;
    for (int i = 0; i < m; ++i) {
      const auto k = s.below(7);
      ASSERT_LT(k, 7u);
      ++counts[k];
    }
    for (int c : counts) chi += std::pow(c - m / 7.0, 2) / (m / 7.0);
  }
  EXPECT_LT(chi, 99.61);
  RandomStream s(3);
  const std::uint64_t big = (std::uint64_t(1) << 63) + 1;
  for (int i = 0; i < 1000; ++i) ASSERT_LT(s.below(big), big);
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(3);
  const int m = 400000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < m; ++i) {
    const double z = s.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / m, 0.0, 0.01);
  EXPECT_NEAR(s2 / m, 1.0, 0.01);
  EXPECT_NEAR(s4 / m, 3.0, 0.05);
}

namespace {

struct Moments {
  double mean = 0, var = 0;
};

Moments moments(const Eigen::VectorXd& x) {
  Moments m;
  m.mean = x.mean();
  m.var = (x.array() - m.mean).square().sum() / static_cast<double>(x.size() - 1);
  return m;
}

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd x = a.array() - a.mean(), y = b.array() - b.mean();
  return (x * y).sum() / std::sqrt(x.square().sum() * y.square().sum());
}

constexpr std::size_t kLarge = 1000000;

}  // namespace

TEST(Dgp, IndependentTripletAtZeroCorrelation) {
  RandomStream s(5);
  const Eigen::MatrixXd t = draw_triplet(kLarge, 0.0, s);
  const double se = 1.0 / std::sqrt(double(kLarge));
  EXPECT_LT(std::abs(correlation(t.col(0), t.col(1))), 3 * se);
  EXPECT_LT(std::abs(correlation(t.col(0), t.col(2))), 3 * se);
  EXPECT_LT(std::abs(correlation(t.col(1), t.col(2))), 3 * se);
}

TEST(Dgp, TripletCorrelation) {
  RandomStream s(6);
  const Eigen::MatrixXd t = draw_triplet(kLarge, 0.2, s);
  EXPECT_NEAR(correlation(t.col(0), t.col(1)), 0.2, 0.003);
  EXPECT_NEAR(correlation(t.col(0), t.col(2)), 0.2, 0.003);
  EXPECT_NEAR(correlation(t.col(1), t.col(2)), 0.2, 0.003);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(moments(t.col(c)).var, 1.0, 0.005) << c;
}

TEST(Dgp, NonPositiveDefiniteCorrelationThrows) {
  RandomStream s(7);
  EXPECT_THROW(draw_triplet(10, -0.6, s), Error);
}

TEST(Dgp, ErrorDesignsHaveUnitVariance) {
  RandomStream s(8);
  const Eigen::MatrixXd t = draw_triplet(kLarge, 0.2, s);
  Eigen::VectorXd v(kLarge);
  for (std::size_t i = 0; i < kLarge; ++i) v(Eigen::Index(i)) = 0.5 * std::erfc(-t(Eigen::Index(i), 2) / std::sqrt(2.0));

  RandomStream es(9);
  const Eigen::VectorXd un = draw_error(Design::UN, t.col(0), t.col(1), v, es);
  EXPECT_NEAR(moments(un).var, 1.0, 0.01);
  EXPECT_LE(un.maxCoeff(), std::sqrt(3.0));
  EXPECT_GE(un.minCoeff(), -std::sqrt(3.0));

  const Eigen::VectorXd nr = draw_error(Design::NR, t.col(0), t.col(1), v, es);
  EXPECT_NEAR(moments(nr).var, 1.0, 0.01);

  const Eigen::VectorXd lg = draw_error(Design::LG, t.col(0), t.col(1), v, es);
  EXPECT_NEAR(moments(lg).var, 1.0, 0.01);

  const Eigen::VectorXd he = draw_error(Design::HE, t.col(0), t.col(1), v, es);
  EXPECT_NEAR(moments(he).var, 1.0, 0.02);
  const double se = 1.0 / std::sqrt(double(kLarge));
  EXPECT_LT(std::abs(correlation(he, t.col(0))), 3 * se);
  EXPECT_LT(std::abs(correlation(he, t.col(1))), 3 * se);
  EXPECT_LT(std::abs(correlation(he, v)), 3 * se);
}

TEST(Dgp, StudentErrorsHaveUnitVariance) {
  // t3 has no fourth moment, so a single 1e6-draw sample variance wanders by
  // several percent; the median over independent streams is stable.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kLarge);
  std::vector<double> vars;
  for (std::uint64_t stream = 0; stream < 9; ++stream) {
    RandomStream es(10, stream);
    vars.push_back(moments(draw_error(Design::T3, zero, zero, zero, es)).var);
  }
  std::nth_element(vars.begin(), vars.begin() + 4, vars.end());
  EXPECT_NEAR(vars[4], 1.0, 0.02);
}

TEST(Dgp, GeneratedDataset) {
  DgpSpec spec;
  spec.n = kLarge;
  spec.seed = 10;
  const Dataset d = generate_dataset(spec);
  ASSERT_EQ(d.size(), kLarge);
  EXPECT_EQ(d.x_tilde.cols(), 1);
  EXPECT_GT(d.v.minCoeff(), 0.0);
  EXPECT_LT(d.v.maxCoeff(), 1.0);
  const double frac = d.y.cast<double>().mean();
  EXPECT_NEAR(frac, 0.5, 0.01);
}

TEST(Dgp, SameSeedSameData) {
  DgpSpec spec;
  spec.n = 200;
  spec.seed = 3;
  spec.design = Design::HE;
  EXPECT_TRUE(generate_dataset(spec) == generate_dataset(spec));
  DgpSpec other = spec;
  other.seed = 4;
  EXPECT_FALSE(generate_dataset(spec) == generate_dataset(other));
}

TEST(Dgp, DesignNames) {
  for (auto d : {Design::UN, Design::NR, Design::T3, Design::LG, Design::HE}) {
    EXPECT_EQ(parse_design(design_name(d)), d);
  }
  try {
    parse_design("XX");
    FAIL();
  } catch (const UsageError& e) {
    const std::string what = e.what();
    for (const char* name : {"UN", "NR", "T3", "LG", "HE"}) {
      EXPECT_NE(what.find(name), std::string::npos) << name;
    }
  }
}

TEST(Dgp, SpecValidation) {
  DgpSpec spec;
  spec.n = 20;
  EXPECT_THROW(spec.validate(), Error);
  spec.n = 100;
  spec.rho = 1.0;
  EXPECT_THROW(spec.validate(), Error);
}
