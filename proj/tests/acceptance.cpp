// One PASS/FAIL line per acceptance criterion. Usage: acceptance <systolab-cli> <scratch-dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "oracles/oracles.hpp"
#include "systolab/factor.hpp"
#include "systolab/gamma.hpp"
#include "systolab/geometry.hpp"
#include "systolab/order.hpp"
#include "systolab/pipeline.hpp"
#include "systolab/rootsys.hpp"
#include "systolab/units.hpp"

using namespace systolab;
namespace fs = std::filesystem;

namespace {

std::string cli;
fs::path work;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int run(const std::string& args, const fs::path& out) {
  std::string cmd = "\"" + cli + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// ------------------------------------------------------------------------ 1

Outcome closed_form_table() {
  auto t0 = std::chrono::steady_clock::now();
  fs::path out = work / "table.txt", csv = work / "table.csv";
  int rc = run("roots table --max-rank 8 --out \"" + csv.string() + "\"", out);
  double secs = seconds_since(t0);
  if (rc != 0) return {false, "CLI exit code " + std::to_string(rc)};
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0, bad = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string name, rank, n;
    std::getline(ss, name, ',');
    std::getline(ss, rank, ',');
    std::getline(ss, n, ',');
    ++rows;
    if (std::stoi(n) != oracle::closed_form_N(name[0], std::stoi(rank))) ++bad;
  }
  // A1..A8, B2..B8, C2..C8, D4..D8, E6..E8, F4, G2.
  bool ok = rows == 32 && bad == 0 && secs < 60;
  return {ok, std::to_string(rows) + " types, " + std::to_string(bad) + " mismatches, " + fmt("%.2f s", secs)};
}

// ------------------------------------------------------------------------ 2

Outcome gamma_family() {
  auto t0 = std::chrono::steady_clock::now();
  int bad = 0;
  std::string first_bad;
  for (auto p64 : first_primes(200)) {
    mpz_class p(static_cast<unsigned long>(p64));
    bool ok = true;
    try {
      auto e = gamma::gamma_matrix(p);
      ok = ok && gamma::determinant(e.matrix) == 1;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          ok = ok && mpz_divisible_p(mpz_class(e.matrix[i][j] - (i == j)).get_mpz_t(), p.get_mpz_t());
      ok = ok && e.charpoly.coeff(0) == -1 && numfield::is_irreducible(e.charpoly);
      auto r = gamma::check_R_regular(e, 256);
      ok = ok && r.real_root_count == 3 && r.all_positive && r.excludes_modulus_one && r.r_regular;
      for (size_t i = 1; i < r.real_roots.size(); ++i) ok = ok && r.real_roots[i - 1].disjoint(r.real_roots[i]);
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok && bad++ == 0) first_bad = p.get_str();
  }
  double secs = seconds_since(t0);
  return {bad == 0 && secs < 300,
          "200 primes, " + std::to_string(bad) + " failures" + (bad ? " (first p=" + first_bad + ")" : "") + ", " +
              fmt("%.2f s", secs)};
}

// ------------------------------------------------------------------------ 3

Outcome regulator_oracles() {
  struct Case {
    const char* poly;
    oracle::CubicField field;
  };
  const std::vector<Case> cases = {
      {"x^3+x^2-2x-1", {{-1, -2, 1, 1}}},
      {"x^3-x-1", {{-1, -1, 0, 1}}},
      {"x^3-x^2-2x-8", {{-8, -2, -1, 1}, 2, {{{2, 0, 0}, {0, 2, 0}, {0, 1, 1}}}}},
      {"x^3-3x-1", {{-1, -3, 0, 1}}},
      {"x^3-4x^2+2x+2", {{2, 2, -4, 1}}},
  };
  double worst = 0, slowest = 0;
  bool ok = true;
  for (const auto& c : cases) {
    auto t0 = std::chrono::steady_clock::now();
    auto us = numfield::unit_group(numfield::maximal_order(numfield::IntPoly::parse(c.poly)), 128);
    double secs = seconds_since(t0);
    double want = static_cast<double>(oracle::brute_regulator(c.field, 20));
    double err = rel(us.regulator.mid_double(), want);
    worst = std::max(worst, err);
    slowest = std::max(slowest, secs);
    ok = ok && err <= 1e-9 && secs < 60;
  }
  return {ok, "5 cubics, worst relative error " + fmt("%.2e", worst) + ", slowest field " + fmt("%.3f s", slowest)};
}

// ------------------------------------------------------------------------ 4

Outcome regulator_invariance() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> d(-3, 3);
  double worst = 0;
  int transforms = 0;
  for (const char* s : {"x^3+x^2-2x-1", "x^3-3x-1", "x^3-4x^2+2x+2", "x^3-6x^2+7x+3"}) {
    auto us = numfield::unit_group(numfield::maximal_order(numfield::IntPoly::parse(s)), 128);
    const auto& O = us.order;
    const double R = us.regulator.mid_double();
    for (int row = 0; row < 3; ++row) worst = std::max(worst, rel(numfield::regulator(us, row).mid_double(), R));
    int here = 0;
    while (here < 25) {
      long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
      if (std::abs(a * e - b * c) != 1) continue;
      std::vector<ZVec> v{O.multiply(O.power(us.units[0], a), O.power(us.units[1], b)),
                          O.multiply(O.power(us.units[0], c), O.power(us.units[1], e))};
      for (int row = 0; row < 3; ++row)
        worst = std::max(worst, rel(numfield::regulator(O, v, row).mid_double(), R));
      ++here;
      ++transforms;
    }
  }
  return {worst <= 1e-12, std::to_string(transforms) + " unimodular changes x 3 deleted rows, worst relative change " +
                              fmt("%.2e", worst)};
}

// ------------------------------------------------------------------------ 5

Outcome geodesic_properties() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-4, 4);
  std::uniform_int_distribution<int> kd(2, 6);
  double worst = 0;
  auto length = [](const std::vector<Interval>& v) { return geometry::geodesic_length({v}).mid_double(); };
  for (int t = 0; t < 1000; ++t) {
    // Exact unimodular triple: lambda_3 = 1 / (lambda_1 lambda_2) at 256 bits.
    Interval a = Interval::point(std::exp(u(rng)), 256), b = Interval::point(std::exp(u(rng)), 256);
    Interval c = Interval::from_integer(1, 256) / (a * b);
    std::vector<Interval> v{a, b, c};
    double L = length(v);
    int k = kd(rng);
    std::vector<Interval> pw, inv;
    for (const auto& x : v) {
      Interval y = Interval::from_integer(1, 256);
      for (int i = 0; i < k; ++i) y = y * x;
      pw.push_back(y);
      inv.push_back(Interval::from_integer(1, 256) / x);
    }
    worst = std::max(worst, rel(length(pw), k * L));
    worst = std::max(worst, rel(length(inv), L));
    worst = std::max(worst, rel(length({v[2], v[0], v[1]}), L));
    worst = std::max(worst, rel(length({v[1], v[0], v[2]}), L));
  }
  Interval one = Interval::from_integer(1, 256);
  double id = length({one, one, one});
  return {worst <= 1e-12 && id == 0,
          "1000 triples, worst relative deviation " + fmt("%.2e", worst) + ", identity length " + fmt("%g", id)};
}

// ------------------------------------------------------------------------ 6

Outcome regulator_sweep_figure() {
  auto t0 = std::chrono::steady_clock::now();
  fs::path csv = work / "sweep200.csv", svg = work / "sweep200.svg", cache = work / "sweep200.jsonl";
  fs::remove(cache);
  int rc = run("sweep --primes 200 --prec 256 --cache \"" + cache.string() + "\" --csv \"" + csv.string() + "\"",
               work / "sweep200.log");
  if (rc != 0) return {false, "sweep exit code " + std::to_string(rc)};
  rc = run("plot --in \"" + csv.string() + "\" --out \"" + svg.string() + "\" --envelopes", work / "plot200.log");
  if (rc != 0) return {false, "plot exit code " + std::to_string(rc)};
  double secs = seconds_since(t0);
  auto recs = pipeline::read_csv(csv.string());
  auto fit = pipeline::fit_envelopes(recs);
  size_t certified = 0, outside = 0;
  for (const auto& r : recs) {
    if (!r.regulator_certified) continue;
    ++certified;
    double D = r.disc_field->get_d(), L = std::log(D), R = *r.regulator_field;
    if (R > fit.upper * std::sqrt(D) * L * L * (1 + 1e-12) || R < fit.lower * L * L * (1 - 1e-12)) ++outside;
  }
  std::ifstream in(svg);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  size_t markers = 0;
  for (size_t pos = text.find("<circle class=\"marker\""); pos != std::string::npos;
       pos = text.find("<circle class=\"marker\"", pos + 1))
    ++markers;
  bool paths = text.find("class=\"envelope upper\"") != std::string::npos &&
               text.find("class=\"envelope lower\"") != std::string::npos;
  bool ok = recs.size() == 200 && certified == markers && certified > 0 && outside == 0 && paths && secs < 1800;
  return {ok, std::to_string(recs.size()) + " records, " + std::to_string(certified) + " certified, " +
                  std::to_string(outside) + " outside the fitted envelopes (upper " + fmt("%.4g", fit.upper) +
                  ", lower " + fmt("%.4g", fit.lower) + "), " + fmt("%.1f s", secs)};
}

// ------------------------------------------------------------------------ 7

Outcome determinism() {
  pipeline::SweepConfig c;
  c.prime_count = 200;
  c.precision_bits = 256;
  auto strip = [](std::vector<pipeline::SweepRecord> r) {
    for (auto& x : r) x.wall_time_ms = 0;
    return pipeline::to_csv(r);
  };
  fs::path a = work / "cold_a.jsonl", b = work / "cold_b.jsonl";
  fs::remove(a);
  fs::remove(b);
  c.cache_path = a.string();
  c.threads = 1;
  pipeline::SweepStats sa, sb, warm;
  std::string ca = strip(pipeline::sweep(c, &sa));
  c.cache_path = b.string();
  c.threads = 3;
  std::string cb = strip(pipeline::sweep(c, &sb));
  auto warm_recs = pipeline::sweep(c, &warm);
  bool ok = ca == cb && sa.computed == 200 && sb.computed == 200 && warm.computed == 0 && strip(warm_recs) == cb;
  return {ok, std::string("cold runs (1 and 3 threads) ") + (ca == cb ? "identical" : "DIFFER") +
                  ", warm rerun recomputed " + std::to_string(warm.computed) + " records"};
}

// ------------------------------------------------------------------------ 8

Outcome discrepancy_report() {
  fs::path csv = work / "sweep200.csv";
  if (!fs::exists(csv)) return {false, "sweep CSV missing"};
  auto recs = pipeline::read_csv(csv.string());
  auto primes = first_primes(200);
  size_t bad = 0, agree = 0;
  for (size_t i = 0; i < recs.size() && i < primes.size(); ++i) {
    const long p = static_cast<long>(primes[i]);
    const auto& r = recs[i];
    if (r.p != primes[i] || r.trace != oracle::gamma_trace(p) || r.minor_sum != oracle::gamma_minor_sum(p)) ++bad;
    auto printed = gamma::printed_char_poly(p);
    bool should_agree = printed == gamma::char_poly(gamma::gamma_matrix(p).matrix);
    if (r.printed_form_agrees != should_agree) ++bad;
    agree += r.printed_form_agrees;
  }
  bool ok = recs.size() == 200 && bad == 0;
  return {ok, std::to_string(recs.size()) + " primes, " + std::to_string(bad) +
                  " symbolic mismatches; printed form agrees for " + std::to_string(agree) + " primes"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <systolab-cli> <scratch-dir>\n";
    return 2;
  }
  cli = argv[1];
  work = argv[2];
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"maximal strongly orthogonal subsets match closed forms up to rank 8", closed_form_table},
      {"gamma_p family: det, congruence, irreducible, 3 distinct positive real roots", gamma_family},
      {"regulators match box-enumeration oracle", regulator_oracles},
      {"regulator invariant under unimodular change and row deletion", regulator_invariance},
      {"geodesic length: powers, inverses, permutations, identity", geodesic_properties},
      {"200-prime sweep, CSV + SVG, fitted envelope sandwich", regulator_sweep_figure},
      {"sweep determinism and warm cache", determinism},
      {"trace and minor-sum per prime, printed form recorded", discrepancy_report},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
