#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "oracles/oracles.hpp"
#include "systolab/error.hpp"
#include "systolab/pipeline.hpp"

using namespace systolab;
using namespace systolab::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("systolab_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<SweepRecord> without_time(std::vector<SweepRecord> r) {
  for (auto& x : r) x.wall_time_ms = 0;
  return r;
}

size_t count(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

mpz_class field_disc_closed_form(long p) { return mpz_class(4 * p * p * p * p + 13 * p * p + 32); }

}  // namespace

// --------------------------------------------------------------------- config

TEST(Config, FileKeys) {
  auto path = scratch("cfg.txt");
  std::ofstream(path) << "# constants\nc1 = 0.5\nc2=2\n gamma_n = 3 \nmetric_c=4 # trailing\nprec=256\nthreads=2\n";
  SweepConfig c;
  apply_config_file(c, path.string());
  EXPECT_EQ(c.envelope.c1, 0.5);
  EXPECT_EQ(c.envelope.c2, 2);
  EXPECT_EQ(c.envelope.gamma_n, 3);
  EXPECT_EQ(c.metric_c, 4);
  EXPECT_EQ(c.precision_bits, 256);
  EXPECT_EQ(c.threads, 2);
}

TEST(Config, Errors) {
  SweepConfig c;
  EXPECT_THROW(apply_config_file(c, "/nonexistent/cfg"), IoError);
  auto path = scratch("bad.txt");
  std::ofstream(path) << "c3 = 1\n";
  EXPECT_THROW(apply_config_file(c, path.string()), ParseError);
  std::ofstream(path) << "c1 = abc\n";
  EXPECT_THROW(apply_config_file(c, path.string()), ParseError);
  std::ofstream(path) << "c1\n";
  EXPECT_THROW(apply_config_file(c, path.string()), ParseError);
}

TEST(Config, Environment) {
  SweepConfig c;
  ::setenv("SYSTOLAB_PREC", "192", 1);
  ::setenv("SYSTOLAB_THREADS", "3", 1);
  apply_environment(c);
  EXPECT_EQ(c.precision_bits, 192);
  EXPECT_EQ(c.threads, 3);
  ::setenv("SYSTOLAB_PREC", "lots", 1);
  EXPECT_THROW(apply_environment(c), ParseError);
  ::unsetenv("SYSTOLAB_PREC");
  ::unsetenv("SYSTOLAB_THREADS");
}

TEST(Config, Validation) {
  SweepConfig c;
  c.prime_count = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = SweepConfig{};
  c.metric_c = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = SweepConfig{};
  c.envelope.c1 = -1;
  EXPECT_THROW(c.validate(), DomainError);
}

// --------------------------------------------------------------------- record

TEST(Record, PrimeTwo) {
  SweepConfig c;
  auto r = compute_record(2, c);
  EXPECT_EQ(r.status, "ok");
  EXPECT_EQ(r.n_real_roots, 3);
  EXPECT_TRUE(r.r_regular);
  EXPECT_TRUE(r.hyper_regular);
  EXPECT_EQ(*r.disc_field, field_disc_closed_form(2));
  EXPECT_EQ(*r.disc_poly, 64 * field_disc_closed_form(2));
  EXPECT_EQ(*r.order_index, 8);
  EXPECT_EQ(r.trace, oracle::gamma_trace(2));
  EXPECT_EQ(r.minor_sum, oracle::gamma_minor_sum(2));
  EXPECT_FALSE(r.printed_form_agrees);
  ASSERT_TRUE(r.regulator_certified);
  long double want = oracle::brute_regulator({{2, 2, -4, 1}}, 20);
  EXPECT_NEAR(*r.regulator_field, static_cast<double>(want), 1e-9 * static_cast<double>(want));
  EXPECT_DOUBLE_EQ(*r.adjusted_regulator, *r.regulator_field * r.unit_index_mod_p->get_d());
  EXPECT_DOUBLE_EQ(*r.torus_vol_lb, *r.adjusted_regulator);
  EXPECT_NEAR(*r.landau_env, std::sqrt(148.0) * std::pow(std::log(148.0), 2), 1e-9);
  EXPECT_NEAR(*r.silverman_env, std::pow(std::log(148.0), 2), 1e-12);
  auto z = oracle::roots({-1, 27, -11, 1});
  long double len = oracle::geodesic_length({z[0].real(), z[1].real(), z[2].real()});
  EXPECT_NEAR(*r.min_geodesic_length, static_cast<double>(len), 1e-12 * static_cast<double>(len));
}

TEST(Record, DiscriminantsFollowClosedForms) {
  SweepConfig c;
  for (long p : {3, 5, 7, 11, 13, 83}) {
    auto r = compute_record(p, c);
    EXPECT_EQ(r.status, "ok") << p;
    EXPECT_EQ(*r.disc_poly, mpz_class(p * p * p) * mpz_class(p * p * p) * field_disc_closed_form(p));
    EXPECT_EQ(*r.disc_poly, *r.order_index * *r.order_index * *r.disc_field);
  }
}

TEST(Record, MetricConstantScalesTorusBound) {
  SweepConfig c;
  c.metric_c = 2.5;
  auto r = compute_record(3, c);
  EXPECT_DOUBLE_EQ(*r.torus_vol_lb, 2.5 * *r.adjusted_regulator);
}

TEST(Record, NonPrimeIsCapturedInStatus) {
  auto r = compute_record(4, SweepConfig{});
  EXPECT_EQ(r.status.rfind("error:", 0), 0u);
  EXPECT_FALSE(r.regulator_field.has_value());
}

TEST(Record, JsonRoundTrip) {
  auto r = compute_record(5, SweepConfig{});
  EXPECT_EQ(record_from_json(record_to_json(r)), r);
  EXPECT_THROW(record_from_json("{\"p\":"), ParseError);
}

// ------------------------------------------------------------------------ CSV

TEST(Csv, RowsHeaderAndRoundTrip) {
  SweepConfig c;
  c.prime_count = 3;
  auto recs = sweep_serial(c);
  auto path = scratch("three.csv");
  emit_csv(recs, path.string());
  std::string text = slurp(path);
  EXPECT_EQ(count(text, "\n"), 4u);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "p,disc_poly,disc_field,order_index,n_real_roots,r_regular,hyper_regular,regulator_field,"
            "regulator_certified,regulator_order,unit_index_mod_p,adjusted_regulator,torus_vol_lb,landau_env,"
            "silverman_env,min_geodesic_length,trace,minor_sum,printed_form_agrees,status,wall_time_ms");
  auto back = read_csv(path.string());
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(to_csv(back), text);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].disc_poly, recs[i].disc_poly);
    EXPECT_NEAR(*back[i].regulator_field, *recs[i].regulator_field, 1e-14 * *recs[i].regulator_field);
  }
}

TEST(Csv, EmptyCellsAndQuotedStatus) {
  SweepRecord r;
  r.p = 7;
  r.status = "uncertified: index bound, saturation \"q=2\"";
  std::string text = to_csv({r});
  EXPECT_NE(text.find(",,"), std::string::npos);
  auto back = parse_csv(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_FALSE(back[0].regulator_field.has_value());
  EXPECT_EQ(back[0].status, r.status);
}

TEST(Csv, Errors) {
  EXPECT_THROW(emit_csv({}, scratch("e.csv").string()), InsufficientData);
  SweepRecord r;
  EXPECT_THROW(emit_csv({r}, "/nonexistent/dir/x.csv"), IoError);
  EXPECT_THROW(parse_csv("a,b\n1,2\n"), ParseError);
  EXPECT_THROW(read_csv("/nonexistent/x.csv"), IoError);
}

// ---------------------------------------------------------------------- cache

TEST(Cache, PutGetAndSchema) {
  auto path = scratch("cache.jsonl");
  auto r = compute_record(3, SweepConfig{});
  {
    RecordCache cache(path.string());
    cache.put(r, 128);
    EXPECT_EQ(cache.get(3, 128), r);
    EXPECT_FALSE(cache.get(3, 256).has_value());
    EXPECT_FALSE(cache.get(3, 128, "systolab-sweep-v0").has_value());
  }
  RecordCache reloaded(path.string());
  EXPECT_EQ(reloaded.get(3, 128), r);
  EXPECT_EQ(reloaded.corrupt_lines(), 0u);
}

TEST(Cache, NewestWinsAndTruncatedLineSkipped) {
  auto path = scratch("trunc.jsonl");
  auto a = compute_record(2, SweepConfig{});
  auto b = compute_record(3, SweepConfig{});
  {
    RecordCache cache(path.string());
    cache.put(a, 128);
    cache.put(b, 128);
    auto a2 = a;
    a2.status = "ok";
    a2.wall_time_ms = 12345;
    cache.put(a2, 128);
  }
  std::string text = slurp(path);
  std::ofstream(path, std::ios::app) << text.substr(0, 40);  // partial record, no newline
  RecordCache cache(path.string());
  EXPECT_EQ(cache.corrupt_lines(), 1u);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.get(2, 128)->wall_time_ms, 12345);
  EXPECT_EQ(cache.get(3, 128), b);
  // Appending after a torn line must not merge with it.
  cache.put(compute_record(5, SweepConfig{}), 128);
  RecordCache again(path.string());
  EXPECT_EQ(again.corrupt_lines(), 1u);
  EXPECT_EQ(again.size(), 3u);
}

TEST(Cache, UnwritablePath) { EXPECT_THROW(RecordCache("/nonexistent/dir/c.jsonl"), IoError); }

// ---------------------------------------------------------------------- sweep

TEST(Sweep, SinglePrime) {
  SweepConfig c;
  c.prime_count = 1;
  auto r = sweep(c);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].p, 2u);
  EXPECT_EQ(r[0].n_real_roots, 3);
}

TEST(Sweep, OrderedFirstPrimes) {
  SweepConfig c;
  c.prime_count = 25;
  auto r = sweep(c);
  auto primes = first_primes(25);
  ASSERT_EQ(r.size(), 25u);
  for (size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i].p, primes[i]);
}

TEST(Sweep, ParallelEqualsSerialForAnyThreadCount) {
  SweepConfig c;
  c.prime_count = 30;
  std::string serial = to_csv(without_time(sweep_serial(c)));
  for (int t : {1, 2, 4}) {
    c.threads = t;
    EXPECT_EQ(to_csv(without_time(sweep(c))), serial) << t << " threads";
  }
}

TEST(Sweep, WarmCacheComputesNothing) {
  SweepConfig c;
  c.prime_count = 15;
  c.cache_path = scratch("warm.jsonl").string();
  SweepStats cold, warm;
  auto first = sweep(c, &cold);
  EXPECT_EQ(cold.computed, 15u);
  auto second = sweep(c, &warm);
  EXPECT_EQ(warm.computed, 0u);
  EXPECT_EQ(warm.cached, 15u);
  EXPECT_EQ(to_csv(first), to_csv(second));
  c.precision_bits = 192;
  SweepStats other;
  sweep(c, &other);
  EXPECT_EQ(other.computed, 15u);
}

TEST(Sweep, InvariantsHold) {
  SweepConfig c;
  c.prime_count = 40;
  for (const auto& r : sweep(c)) {
    if (r.regulator_certified) {
      ASSERT_TRUE(r.regulator_field.has_value());
      EXPECT_GT(*r.regulator_field, 0);
      EXPECT_TRUE(std::isfinite(*r.regulator_field));
    }
    EXPECT_TRUE(r.n_real_roots == 1 || r.n_real_roots == 3);
    EXPECT_GT(*r.landau_env, 0);
    if (r.n_real_roots == 3) EXPECT_TRUE(r.r_regular);
  }
}

TEST(Sweep, BudgetStatusIsRecorded) {
  SweepConfig c;
  c.prime_count = 3;
  c.units.max_rounds = 1;
  c.units.max_points = 1;
  SweepStats st;
  auto r = sweep(c, &st);
  EXPECT_EQ(r.size(), 3u);
  EXPECT_GT(st.budget_exhausted, 0u);
  for (const auto& x : r)
    if (x.budget_exhausted()) EXPECT_FALSE(x.regulator_field.has_value());
}

// ------------------------------------------------------------------ envelopes

TEST(Envelopes, FittedSandwich) {
  SweepConfig c;
  c.prime_count = 40;
  auto recs = sweep(c);
  auto fit = fit_envelopes(recs);
  EXPECT_EQ(fit.points, 40u);
  for (const auto& r : recs) {
    double D = r.disc_field->get_d(), L = std::log(D);
    EXPECT_LE(*r.regulator_field, fit.upper * std::sqrt(D) * L * L * (1 + 1e-12));
    EXPECT_GE(*r.regulator_field, fit.lower * L * L * (1 - 1e-12));
  }
  EXPECT_THROW(fit_envelopes({recs[0]}), InsufficientData);
}

TEST(Plot, ElementCounts) {
  SweepConfig c;
  c.prime_count = 20;
  auto recs = sweep(c);
  PlotOptions o;
  std::string svg = render_svg(recs, o);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<circle class=\"marker\""), 20u);
  EXPECT_EQ(count(svg, "<path class=\"envelope"), 2u);
  o.envelopes = false;
  EXPECT_EQ(count(render_svg(recs, o), "<path class=\"envelope"), 0u);
  o.x_axis = XAxis::Discriminant;
  std::string by_disc = render_svg(recs, o);
  EXPECT_NE(by_disc.find("field discriminant"), std::string::npos);
  EXPECT_NE(by_disc, svg);
  EXPECT_THROW(render_svg({recs[0]}, o), InsufficientData);
  auto path = scratch("plot.svg");
  emit_plot(recs, path.string(), PlotOptions{});
  EXPECT_EQ(slurp(path), svg);
}
