#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "systolab/error.hpp"
#include "systolab/geometry.hpp"

using namespace systolab;
using namespace systolab::geometry;

namespace {

double len(const std::vector<double>& v) { return geodesic_length(EigenvalueData::from_doubles(v, 128)).mid_double(); }

}  // namespace

TEST(GeodesicLength, Examples) {
  const double e = std::exp(1.0);
  EXPECT_NEAR(len({e, 1 / e}), 2 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(len({e, e, 1 / (e * e)}), 6.0, 1e-14);
  EXPECT_EQ(len({1, 1, 1}), 0.0);
}

TEST(GeodesicLength, MatchesDirectFormula) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 200; ++t) {
    double a = std::exp(u(rng)), b = std::exp(u(rng));
    std::vector<double> v{a, b, 1 / (a * b)};
    long double want = oracle::geodesic_length({a, b, 1.0L / (static_cast<long double>(a) * b)});
    EXPECT_NEAR(len(v), static_cast<double>(want), 1e-12 * static_cast<double>(want));
  }
}

TEST(GeodesicLength, Rejections) {
  EXPECT_THROW(len({1.0}), DomainError);
  EXPECT_THROW(len({2.0, -0.5}), DomainError);
  EXPECT_THROW(len({2.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(len({2.0, 2.0, 2.0}), InvalidArgument);
}

TEST(TorusVolume, Scaling) {
  EXPECT_EQ(torus_volume_lower(1, 1), 1);
  EXPECT_EQ(torus_volume_lower(0.5255, 1), 0.5255);
  EXPECT_DOUBLE_EQ(torus_volume_lower(3 * 0.5255, 2), 3 * torus_volume_lower(0.5255, 2));
  EXPECT_THROW(torus_volume_lower(0, 1), DomainError);
  EXPECT_THROW(torus_volume_lower(1, -1), DomainError);
}

TEST(Envelopes, Examples) {
  EnvelopeParams p;
  EXPECT_NEAR(landau_envelope(49, p), 7 * std::pow(std::log(49.0), 2), 1e-12);
  EXPECT_NEAR(landau_envelope(49, p), 106.03, 0.01);
  EnvelopeParams half = p;
  half.c1 = 0.5;
  EXPECT_DOUBLE_EQ(landau_envelope(1000, half), 0.5 * landau_envelope(1000, p));
  EnvelopeParams n1 = p;
  n1.degree_n = 1;
  EXPECT_DOUBLE_EQ(landau_envelope(1000, n1), std::sqrt(1000.0));
  EXPECT_THROW(landau_envelope(1, p), DomainError);

  EXPECT_NEAR(silverman_envelope(1000, p), std::pow(std::log(1000.0), 2), 1e-12);
  EnvelopeParams flat = p;
  flat.subfield_rank_rho = 2;
  flat.c2 = 3;
  EXPECT_EQ(silverman_envelope(1000, flat), 3);
  EnvelopeParams tiny = p;
  tiny.gamma_n = 0.25;
  EXPECT_THROW(silverman_envelope(2, tiny), DomainError);
  EnvelopeParams bad = p;
  bad.subfield_rank_rho = 3;
  EXPECT_THROW(silverman_envelope(100, bad), DomainError);
}

TEST(Envelopes, SilvermanAtESquared) {
  // With gamma_n * D = e^2 the log is 2; D is an integer, so move e^2 into gamma_n.
  EnvelopeParams p;
  p.gamma_n = std::exp(2.0) / 7;
  EXPECT_NEAR(silverman_envelope(7, p), 4.0, 1e-12);
}

TEST(Envelopes, StrictlyIncreasing) {
  EnvelopeParams p;
  double prev_l = 0, prev_s = 0;
  for (long D = 2; D < 100000; D = D * 3 / 2 + 1) {
    double l = landau_envelope(D, p), s = silverman_envelope(D, p);
    EXPECT_GT(l, prev_l);
    EXPECT_GT(s, prev_s);
    prev_l = l;
    prev_s = s;
  }
  EXPECT_GT(landau_envelope(mpz_class("200000000000000000000000000000"), p),
            landau_envelope(mpz_class("100000000000000000000000000000"), p));
}

TEST(UnitRank, Dirichlet) {
  EXPECT_EQ(unit_rank(3, 0), 2);
  EXPECT_EQ(unit_rank(1, 1), 1);
  EXPECT_EQ(unit_rank(0, 1), 0);
  EXPECT_EQ(unit_rank(1, 1, 3), 1);
  EXPECT_THROW(unit_rank(1, 1, 4), InvalidArgument);
  EXPECT_THROW(unit_rank(-1, 2), InvalidArgument);
}
