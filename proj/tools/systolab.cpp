#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "systolab/error.hpp"
#include "systolab/gamma.hpp"
#include "systolab/geometry.hpp"
#include "systolab/order.hpp"
#include "systolab/pipeline.hpp"
#include "systolab/rootsys.hpp"
#include "systolab/units.hpp"

using namespace systolab;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kBudget = 3 };

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string interval_text(const Interval& x) { return "[" + x.lo().to_string(20) + ", " + x.hi().to_string(20) + "]"; }

std::string vec_text(const ZVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

std::string poly_json(const numfield::IntPoly& f) { return f.to_string(); }

// --------------------------------------------------------------------- roots

int cmd_roots(const std::string& family, int rank) {
  if (family.size() != 1) throw InvalidType("--type expects one letter A-G");
  rootsys::CartanType type{static_cast<char>(std::toupper(static_cast<unsigned char>(family[0]))), rank};
  rootsys::validate(type);
  rootsys::RootSystem sys = rootsys::generate_root_system(type);
  rootsys::OrthoSet best = rootsys::max_strongly_orthogonal(sys);
  std::cout << "type " << type.name() << "\n";
  std::cout << "roots " << sys.roots.size() << " (positive " << sys.positives.size() << ")\n";
  std::cout << "positive roots:\n";
  for (size_t i = 0; i < sys.positives.size(); ++i)
    std::cout << "  " << sys.positives[i].to_string() << "  height " << sys.heights[i] << "\n";
  std::cout << "maximal strongly orthogonal subset:\n";
  for (const auto& r : best.members) std::cout << "  " << r.to_string() << "\n";
  std::cout << "N = " << best.members.size() << "\n";
  return kOk;
}

int cmd_roots_table(int max_rank, const std::string& out) {
  auto table = rootsys::table_N(max_rank);
  std::ofstream csv;
  if (!out.empty()) {
    csv.open(out);
    if (!csv) throw IoError("cannot write " + out);
    csv << "type,rank,N,closed_form,match\n";
  }
  int mismatches = 0;
  std::printf("%-6s %6s %4s %12s %6s\n", "type", "|roots|", "N", "closed_form", "match");
  for (const auto& [type, n] : table) {
    const int expected = rootsys::closed_form_N(type);
    const auto roots = rootsys::generate_root_system(type).roots.size();
    const bool ok = n == expected;
    mismatches += !ok;
    std::printf("%-6s %6zu %4d %12d %6s\n", type.name().c_str(), roots, n, expected, ok ? "yes" : "NO");
    if (csv.is_open())
      csv << type.name() << "," << type.rank << "," << n << "," << expected << "," << (ok ? "true" : "false") << "\n";
  }
  if (csv.is_open() && !csv) throw IoError("write failed for " + out);
  std::printf("%zu types, %d mismatches\n", table.size(), mismatches);
  return kOk;
}

// --------------------------------------------------------------------- field

int cmd_field_reg(const std::string& poly_text, int prec, bool as_json) {
  numfield::IntPoly f = numfield::IntPoly::parse(poly_text);
  numfield::NumberFieldOrder order = numfield::maximal_order(f);
  numfield::UnitSystem us = numfield::unit_group(order, prec);
  std::string reason;
  if (!us.certified) {
    reason = order.maximality_certified()
                 ? numfield::certify_fundamental(us, numfield::default_lower_bound_constant(us.signature)).reason
                 : "discriminant not fully factored";
  }
  if (as_json) {
    json units = json::array();
    for (const auto& u : us.units) {
      json row = json::array();
      for (const auto& c : u) row.push_back(c.get_str());
      units.push_back(row);
    }
    json basis = json::array();
    for (const auto& row : order.basis()) {
      json r = json::array();
      for (const auto& q : row) r.push_back(q.get_str());
      basis.push_back(r);
    }
    json j{{"poly", poly_json(f)},
           {"disc_poly", order.disc_poly().get_str()},
           {"disc_field", order.disc_field().get_str()},
           {"index", order.index().get_str()},
           {"maximality_certified", order.maximality_certified()},
           {"signature", {us.signature.r1, us.signature.r2}},
           {"integral_basis", basis},
           {"units", units},
           {"regulator", us.regulator.mid_double()},
           {"regulator_enclosure", {us.regulator.lo().to_string(25), us.regulator.hi().to_string(25)}},
           {"certified", us.certified},
           {"uncertified_reason", reason},
           {"precision_bits", us.precision_bits}};
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "poly        " << f.to_string() << "\n";
  std::cout << "disc_poly   " << order.disc_poly().get_str() << "\n";
  std::cout << "disc_field  " << order.disc_field().get_str() << "\n";
  std::cout << "index       " << order.index().get_str() << (order.maximality_certified() ? "" : " (maximality not certified)")
            << "\n";
  std::cout << "signature   (" << us.signature.r1 << ", " << us.signature.r2 << ")\n";
  std::cout << "integral basis (rows in powers of x):\n";
  for (const auto& row : order.basis()) {
    std::cout << "  ";
    for (const auto& q : row) std::cout << q.get_str() << " ";
    std::cout << "\n";
  }
  std::cout << "units (integral basis coordinates):\n";
  for (const auto& u : us.units) std::cout << "  " << vec_text(u) << "\n";
  std::cout << "regulator   " << fmt(us.regulator.mid_double()) << "  " << interval_text(us.regulator) << "\n";
  std::cout << "certified   " << (us.certified ? "yes" : "no: " + reason) << "\n";
  return kOk;
}

// --------------------------------------------------------------------- gamma

int cmd_gamma(const std::string& prime_text, int prec, bool as_json) {
  mpz_class p;
  if (p.set_str(prime_text, 10) != 0) throw InvalidArgument("--prime expects a decimal integer");
  gamma::CongruenceElement e = gamma::gamma_matrix(p);
  gamma::RegularityReport r = gamma::check_R_regular(e, prec);
  if (as_json) {
    json m = json::array();
    for (const auto& row : e.matrix) m.push_back({row[0].get_str(), row[1].get_str(), row[2].get_str()});
    json roots = json::array();
    for (const auto& x : r.real_roots) roots.push_back({x.lo().to_string(25), x.hi().to_string(25)});
    json j{{"p", p.get_str()},
           {"matrix", m},
           {"determinant", gamma::determinant(e.matrix).get_str()},
           {"charpoly", e.charpoly.to_string()},
           {"printed_form", e.printed_form.to_string()},
           {"printed_form_agrees", e.printed_form_agrees},
           {"trace", e.trace.get_str()},
           {"minor_sum", e.minor_sum.get_str()},
           {"regularity",
            {{"real_root_count", r.real_root_count},
             {"excludes_plus_minus_one", r.excludes_plus_minus_one},
             {"excludes_modulus_one", r.excludes_modulus_one},
             {"r_regular", r.r_regular},
             {"hyper_regular", r.hyper_regular},
             {"all_positive", r.all_positive},
             {"real_roots", roots},
             {"precision_bits", r.precision_bits}}}};
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "gamma_" << p.get_str() << " =\n";
  for (const auto& row : e.matrix)
    std::cout << "  [" << row[0].get_str() << " " << row[1].get_str() << " " << row[2].get_str() << "]\n";
  std::cout << "charpoly (from matrix)  " << e.charpoly.to_string() << "\n";
  std::cout << "printed form            " << e.printed_form.to_string() << "\n";
  std::cout << "forms agree             " << (e.printed_form_agrees ? "yes" : "no") << "\n";
  std::cout << "trace " << e.trace.get_str() << ", minor sum " << e.minor_sum.get_str() << "\n";
  std::cout << "real roots              " << r.real_root_count << "\n";
  for (const auto& x : r.real_roots) std::cout << "  " << interval_text(x) << "\n";
  std::cout << "no root +-1             " << (r.excludes_plus_minus_one ? "yes" : "no") << "\n";
  std::cout << "no root of modulus 1    " << (r.excludes_modulus_one ? "yes" : "no") << "\n";
  std::cout << "R-regular               " << (r.r_regular ? "yes" : "no") << "\n";
  std::cout << "hyper-regular           " << (r.hyper_regular ? "yes" : "no") << "\n";
  return kOk;
}

// ---------------------------------------------------------------------- geom

int cmd_geom_length(const std::string& eigs_text, int prec) {
  std::vector<double> values;
  std::stringstream ss(eigs_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError("--eigs expects comma-separated numbers, got '" + item + "'");
    }
  }
  auto eigs = geometry::EigenvalueData::from_doubles(values, prec);
  Interval len = geometry::geodesic_length(eigs);
  std::cout << fmt(len.mid_double()) << "\n";
  return kOk;
}

// --------------------------------------------------------------------- sweep

int cmd_sweep(pipeline::SweepConfig& cfg) {
  pipeline::SweepStats stats;
  auto records = pipeline::sweep(cfg, &stats);
  pipeline::emit_csv(records, cfg.csv_path);
  if (!cfg.json_path.empty()) pipeline::emit_json(records, cfg.json_path);
  std::size_t certified = 0;
  for (const auto& r : records) certified += r.regulator_certified;
  std::cerr << records.size() << " records (" << stats.computed << " computed, " << stats.cached << " cached, "
            << certified << " certified)";
  if (stats.corrupt_cache_lines) std::cerr << ", skipped " << stats.corrupt_cache_lines << " corrupt cache lines";
  std::cerr << "\n";
  if (stats.budget_exhausted) {
    std::cerr << stats.budget_exhausted << " records hit a computation budget\n";
    return kBudget;
  }
  return kOk;
}

int cmd_plot(const std::string& in, const std::string& out, const std::string& axis, bool envelopes) {
  pipeline::PlotOptions opts;
  opts.x_axis = axis == "disc" ? pipeline::XAxis::Discriminant : pipeline::XAxis::Prime;
  opts.envelopes = envelopes;
  auto records = pipeline::read_csv(in);
  pipeline::emit_plot(records, out, opts);
  if (envelopes) {
    auto fit = pipeline::fit_envelopes(records);
    std::cerr << "fitted: upper " << fmt(fit.upper) << " sqrt(D) log^2 D, lower " << fmt(fit.lower) << " log^2 D over "
              << fit.points << " points\n";
  }
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const BudgetExhausted*>(&e) || dynamic_cast<const PrecisionExhausted*>(&e) ||
      dynamic_cast<const FactorizationFailure*>(&e) || dynamic_cast<const RankDeficient*>(&e))
    return kBudget;
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"systolab: strongly orthogonal roots, congruence elements, regulators and systole bounds"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file (c1, c2, gamma_n, metric_c, prec, threads)");

  pipeline::SweepConfig cfg;
  std::optional<int> prec_flag;
  std::optional<int> threads_flag;

  // roots
  auto* roots = app.add_subcommand("roots", "root systems and maximal strongly orthogonal subsets");
  std::string family;
  int rank = 0;
  roots->add_option("--type", family, "family letter A-G");
  roots->add_option("--rank", rank, "rank");
  roots->require_subcommand(0, 1);
  auto* table = roots->add_subcommand("table", "N for every type up to a rank, with closed forms");
  int max_rank = 8;
  std::string table_out;
  table->add_option("--max-rank", max_rank, "largest rank")->check(CLI::Range(1, 8));
  table->add_option("--out", table_out, "also write CSV");

  // field
  auto* field = app.add_subcommand("field", "number fields");
  field->require_subcommand(1);
  auto* reg = field->add_subcommand("reg", "maximal order, fundamental units and regulator");
  std::string poly_text;
  bool field_json = false;
  reg->add_option("--poly", poly_text, "monic integer polynomial, e.g. \"x^3+x^2-2x-1\"")->required();
  reg->add_option("--prec", prec_flag, "working precision in bits");
  reg->add_flag("--json", field_json, "print JSON instead of text");

  // gamma
  auto* gam = app.add_subcommand("gamma", "the congruence element gamma_p");
  std::string prime_text;
  bool gamma_json = false;
  gam->add_option("--prime", prime_text, "a prime p")->required();
  gam->add_flag("--json", gamma_json, "print JSON instead of text");

  // geom
  auto* geom = app.add_subcommand("geom", "metric formulas");
  geom->require_subcommand(1);
  auto* length = geom->add_subcommand("length", "geodesic length from eigenvalue moduli");
  std::string eigs_text;
  length->add_option("--eigs", eigs_text, "comma-separated positive eigenvalue moduli")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "regulator sweep over the first N primes");
  std::size_t prime_count = 0;
  sw->add_option("--primes", prime_count, "number of primes")->required()->check(CLI::PositiveNumber);
  sw->add_option("--prec", prec_flag, "working precision in bits");
  sw->add_option("--threads", threads_flag, "worker threads (0: OpenMP default)");
  sw->add_option("--cache", cfg.cache_path, "JSON-lines cache")->required();
  sw->add_option("--csv", cfg.csv_path, "CSV output")->required();
  sw->add_option("--json", cfg.json_path, "JSON output");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG scatter of regulators from a sweep CSV");
  std::string plot_in, plot_out, axis = "p";
  bool envelopes = false;
  plot->add_option("--in", plot_in, "sweep CSV")->required();
  plot->add_option("--out", plot_out, "SVG output")->required();
  plot->add_option("--x", axis, "abscissa")->check(CLI::IsMember({"p", "disc"}));
  plot->add_flag("--envelopes", envelopes, "overlay fitted envelope curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) pipeline::apply_config_file(cfg, config_path);
    pipeline::apply_environment(cfg);
    if (prec_flag) cfg.precision_bits = *prec_flag;
    if (threads_flag) cfg.threads = *threads_flag;
    if (cfg.precision_bits < 32) throw InvalidArgument("precision must be at least 32 bits");

    if (*roots) {
      if (*table) return cmd_roots_table(max_rank, table_out);
      if (family.empty() || rank == 0) {
        std::cerr << "roots needs --type and --rank, or the table subcommand\n";
        return kUsage;
      }
      return cmd_roots(family, rank);
    }
    if (*reg) return cmd_field_reg(poly_text, cfg.precision_bits, field_json);
    if (*gam) return cmd_gamma(prime_text, cfg.precision_bits, gamma_json);
    if (*length) return cmd_geom_length(eigs_text, cfg.precision_bits);
    if (*sw) {
      cfg.prime_count = prime_count;
      return cmd_sweep(cfg);
    }
    if (*plot) return cmd_plot(plot_in, plot_out, axis, envelopes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}
