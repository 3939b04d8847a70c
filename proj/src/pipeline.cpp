#include "systolab/pipeline.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "systolab/error.hpp"
#include "systolab/gamma.hpp"
#include "systolab/order.hpp"

namespace systolab::pipeline {

using json = nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "' expects a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("'" + key + "' expects an integer, got '" + value + "'");
  }
}

}  // namespace

void SweepConfig::validate() const {
  if (prime_count < 1) throw InvalidArgument("prime_count must be at least 1");
  if (precision_bits < 32) throw InvalidArgument("precision must be at least 32 bits");
  if (threads < 0) throw InvalidArgument("thread count must be nonnegative");
  if (order_index_cap < 1 || units.max_points < 1 || units.max_rounds < 1 || factor.rho_iterations < 1)
    throw InvalidArgument("effort caps must be positive");
  if (!(metric_c > 0)) throw InvalidArgument("metric_c must be positive");
  envelope.validate();
}

void apply_config_file(SweepConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "c1")
      config.envelope.c1 = parse_double(key, value);
    else if (key == "c2")
      config.envelope.c2 = parse_double(key, value);
    else if (key == "gamma_n")
      config.envelope.gamma_n = parse_double(key, value);
    else if (key == "metric_c")
      config.metric_c = parse_double(key, value);
    else if (key == "prec")
      config.precision_bits = parse_int(key, value);
    else if (key == "threads")
      config.threads = parse_int(key, value);
    else
      throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

void apply_environment(SweepConfig& config) {
  if (const char* v = std::getenv("SYSTOLAB_PREC"); v && *v) config.precision_bits = parse_int("SYSTOLAB_PREC", v);
  if (const char* v = std::getenv("SYSTOLAB_THREADS"); v && *v) config.threads = parse_int("SYSTOLAB_THREADS", v);
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "p",           "disc_poly",     "disc_field",      "order_index",         "n_real_roots",
      "r_regular",   "hyper_regular", "regulator_field", "regulator_certified", "regulator_order",
      "unit_index_mod_p", "adjusted_regulator", "torus_vol_lb", "landau_env",   "silverman_env",
      "min_geodesic_length", "trace", "minor_sum",       "printed_form_agrees", "status",
      "wall_time_ms"};
  return cols;
}

// ---------------------------------------------------------------------------

namespace {

// p^3 * g((x - 1)/p) for a cubic g, as an integer polynomial.
numfield::IntPoly shift_scale_cubic(const numfield::IntPoly& g, const mpz_class& p) {
  // (x - 1)^k coefficients, low to high.
  const std::vector<std::vector<long>> binom = {{1}, {-1, 1}, {1, -2, 1}, {-1, 3, -3, 1}};
  std::vector<mpz_class> out(4, 0);
  mpz_class scale = 1;  // p^(3 - k)
  for (int k = 3; k >= 0; --k) {
    for (size_t i = 0; i < binom[static_cast<size_t>(k)].size(); ++i)
      out[i] += g.coeff(k) * scale * binom[static_cast<size_t>(k)][i];
    scale *= p;
  }
  return numfield::IntPoly(out);
}

std::string describe(const numfield::CertificationReport& rep) { return rep.reason; }

}  // namespace

SweepRecord compute_record(std::uint64_t p_small, const SweepConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.p = p_small;
  const mpz_class p(static_cast<unsigned long>(p_small));
  try {
    gamma::CongruenceElement elt = gamma::gamma_matrix(p);
    rec.trace = elt.trace;
    rec.minor_sum = elt.minor_sum;
    rec.printed_form_agrees = elt.printed_form_agrees;
    rec.disc_poly = numfield::poly_discriminant(elt.charpoly);

    gamma::RegularityReport reg = gamma::check_R_regular(elt, config.precision_bits);
    rec.n_real_roots = reg.real_root_count;
    rec.r_regular = reg.r_regular;
    rec.hyper_regular = reg.hyper_regular;
    if (reg.real_root_count == 3) {
      geometry::EigenvalueData eigs{reg.real_roots};
      rec.min_geodesic_length = geometry::geodesic_length(eigs).mid_double();
    }

    const numfield::IntPoly fm = gamma::centralizer_poly(p);
    if (!(shift_scale_cubic(fm, p) == elt.charpoly))
      throw Error("centralizer polynomial does not match the characteristic polynomial");

    numfield::MaximalOrderOptions mopts{config.factor};
    numfield::NumberFieldOrder order = numfield::maximal_order(fm, mopts);
    rec.disc_field = order.disc_field();
    rec.order_index = order.index() * p * p * p;
    if (*rec.disc_poly != *rec.order_index * *rec.order_index * *rec.disc_field)
      throw Error("discriminant identity failed");
    rec.landau_env = geometry::landau_envelope(abs(order.disc_field()), config.envelope);
    rec.silverman_env = geometry::silverman_envelope(abs(order.disc_field()), config.envelope);

    numfield::UnitSystem us = numfield::unit_group(order, config.precision_bits, config.units);
    const double reg_value = us.regulator.mid_double();
    std::string why;
    if (!order.maximality_certified()) {
      why = "discriminant not fully factored";
    } else if (!us.certified) {
      why = describe(numfield::certify_fundamental(us, numfield::default_lower_bound_constant(us.signature),
                                                   config.units.max_saturation_prime));
    }
    rec.regulator_certified = why.empty();
    if (!rec.regulator_certified) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.15g", reg_value);
      rec.status = "uncertified: " + why + " (heuristic regulator " + buf + ")";
    } else {
      rec.regulator_field = reg_value;
      mpz_class idx = numfield::unit_index_mod_p(us, p);
      rec.unit_index_mod_p = idx;
      rec.adjusted_regulator = reg_value * idx.get_d();
      rec.torus_vol_lb = geometry::torus_volume_lower(*rec.adjusted_regulator, config.metric_c);
      std::uint64_t sub = numfield::suborder_unit_index(order, numfield::equation_order(fm), us.units,
                                                        config.order_index_cap);
      rec.regulator_order = reg_value * static_cast<double>(sub);
      rec.status = "ok";
    }
  } catch (const BudgetExhausted& e) {
    rec.status = std::string("budget: ") + e.what();
  } catch (const RankDeficient& e) {
    rec.status = std::string("budget: ") + e.what();
  } catch (const PrecisionExhausted& e) {
    rec.status = std::string("budget: ") + e.what();
  } catch (const FactorizationFailure& e) {
    rec.status = std::string("budget: ") + e.what();
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

// ---------------------------------------------------------------------------
// JSON codec.

namespace {

json opt_int(const std::optional<mpz_class>& v) { return v ? json(v->get_str()) : json(nullptr); }
json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<mpz_class> get_int(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return mpz_class(v.get<std::string>());
}

std::optional<double> get_num(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

json to_json_obj(const SweepRecord& r) {
  return json{{"p", r.p},
              {"disc_poly", opt_int(r.disc_poly)},
              {"disc_field", opt_int(r.disc_field)},
              {"order_index", opt_int(r.order_index)},
              {"n_real_roots", r.n_real_roots},
              {"r_regular", r.r_regular},
              {"hyper_regular", r.hyper_regular},
              {"regulator_field", opt_num(r.regulator_field)},
              {"regulator_certified", r.regulator_certified},
              {"regulator_order", opt_num(r.regulator_order)},
              {"unit_index_mod_p", opt_int(r.unit_index_mod_p)},
              {"adjusted_regulator", opt_num(r.adjusted_regulator)},
              {"torus_vol_lb", opt_num(r.torus_vol_lb)},
              {"landau_env", opt_num(r.landau_env)},
              {"silverman_env", opt_num(r.silverman_env)},
              {"min_geodesic_length", opt_num(r.min_geodesic_length)},
              {"trace", r.trace.get_str()},
              {"minor_sum", r.minor_sum.get_str()},
              {"printed_form_agrees", r.printed_form_agrees},
              {"status", r.status},
              {"wall_time_ms", r.wall_time_ms}};
}

SweepRecord from_json_obj(const json& j) {
  SweepRecord r;
  r.p = j.at("p").get<std::uint64_t>();
  r.disc_poly = get_int(j, "disc_poly");
  r.disc_field = get_int(j, "disc_field");
  r.order_index = get_int(j, "order_index");
  r.n_real_roots = j.at("n_real_roots").get<int>();
  r.r_regular = j.at("r_regular").get<bool>();
  r.hyper_regular = j.at("hyper_regular").get<bool>();
  r.regulator_field = get_num(j, "regulator_field");
  r.regulator_certified = j.at("regulator_certified").get<bool>();
  r.regulator_order = get_num(j, "regulator_order");
  r.unit_index_mod_p = get_int(j, "unit_index_mod_p");
  r.adjusted_regulator = get_num(j, "adjusted_regulator");
  r.torus_vol_lb = get_num(j, "torus_vol_lb");
  r.landau_env = get_num(j, "landau_env");
  r.silverman_env = get_num(j, "silverman_env");
  r.min_geodesic_length = get_num(j, "min_geodesic_length");
  r.trace = mpz_class(j.at("trace").get<std::string>());
  r.minor_sum = mpz_class(j.at("minor_sum").get<std::string>());
  r.printed_form_agrees = j.at("printed_form_agrees").get<bool>();
  r.status = j.at("status").get<std::string>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  return r;
}

}  // namespace

std::string record_to_json(const SweepRecord& r) { return to_json_obj(r).dump(); }

SweepRecord record_from_json(const std::string& text) {
  try {
    return from_json_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad record JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad integer in record JSON: ") + e.what());
  }
}

void emit_json(const std::vector<SweepRecord>& records, const std::string& path) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json_obj(r));
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << arr.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Cache.

RecordCache::RecordCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  bool needs_newline = false;
  if (in) {
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    needs_newline = !content.empty() && content.back() != '\n';
    std::istringstream lines(content);
    std::string line;
    while (std::getline(lines, line)) {
      if (trim(line).empty()) continue;
      try {
        json j = json::parse(line);
        const auto& k = j.at("key");
        Key key{k.at("p").get<std::uint64_t>(), k.at("prec").get<int>(), k.at("schema").get<std::string>()};
        entries_[key] = from_json_obj(j.at("record"));
      } catch (const std::exception&) {
        ++corrupt_;
      }
    }
  }
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open cache " + path_ + " for writing");
  if (needs_newline) out << "\n";
}

std::optional<SweepRecord> RecordCache::get(std::uint64_t p, int precision_bits, const std::string& schema) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(Key{p, precision_bits, schema});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void RecordCache::put(const SweepRecord& record, int precision_bits, const std::string& schema) {
  std::lock_guard<std::mutex> lock(mu_);
  json line{{"key", {{"p", record.p}, {"prec", precision_bits}, {"schema", schema}}}, {"record", to_json_obj(record)}};
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << line.dump() << "\n";
    out.flush();
    if (!out) throw IoError("cannot append to cache " + path_);
  }
  entries_[Key{record.p, precision_bits, schema}] = record;
}

std::size_t RecordCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// Sweep.

namespace {

bool cacheable(const SweepRecord& r) { return r.status.rfind("budget", 0) != 0 && r.status.rfind("error", 0) != 0; }

std::vector<SweepRecord> run_sweep(const SweepConfig& config, SweepStats* stats, bool parallel) {
  config.validate();
  const auto primes = first_primes(config.prime_count);
  std::optional<RecordCache> cache;
  if (!config.cache_path.empty()) cache.emplace(config.cache_path);

  std::vector<SweepRecord> records(primes.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    auto hit = cache ? cache->get(primes[i], config.precision_bits) : std::nullopt;
    if (hit)
      records[i] = std::move(*hit);
    else
      missing.push_back(i);
  }

  std::string io_failure;
  auto work = [&](std::size_t i) {
    SweepRecord r = compute_record(primes[i], config);
    if (cache && cacheable(r)) {
      try {
        cache->put(r, config.precision_bits);
      } catch (const std::exception& e) {
#pragma omp critical(systolab_io_failure)
        io_failure = e.what();
      }
    }
    records[i] = std::move(r);
  };
  const long count = static_cast<long>(missing.size());
  if (parallel) {
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long k = 0; k < count; ++k) work(missing[static_cast<std::size_t>(k)]);
  } else {
    for (long k = 0; k < count; ++k) work(missing[static_cast<std::size_t>(k)]);
  }
  if (!io_failure.empty()) throw IoError(io_failure);

  if (stats) {
    stats->computed = missing.size();
    stats->cached = primes.size() - missing.size();
    stats->corrupt_cache_lines = cache ? cache->corrupt_lines() : 0;
    stats->budget_exhausted = 0;
    for (const auto& r : records)
      if (r.budget_exhausted()) ++stats->budget_exhausted;
  }
  return records;
}

}  // namespace

std::vector<SweepRecord> sweep(const SweepConfig& config, SweepStats* stats) { return run_sweep(config, stats, true); }

std::vector<SweepRecord> sweep_serial(const SweepConfig& config, SweepStats* stats) {
  return run_sweep(config, stats, false);
}

// ---------------------------------------------------------------------------
// CSV.

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }
std::string cell(const std::optional<mpz_class>& v) { return v ? v->get_str() : ""; }
std::string cell(bool b) { return b ? "true" : "false"; }

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> read_num(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in CSV");
  }
}

std::optional<mpz_class> read_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  mpz_class z;
  if (z.set_str(s, 10) != 0) throw ParseError("bad integer '" + s + "' in CSV");
  return z;
}

bool read_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError("bad boolean '" + s + "' in CSV");
}

}  // namespace

std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : records) {
    std::vector<std::string> cells = {std::to_string(r.p),
                                      cell(r.disc_poly),
                                      cell(r.disc_field),
                                      cell(r.order_index),
                                      std::to_string(r.n_real_roots),
                                      cell(r.r_regular),
                                      cell(r.hyper_regular),
                                      cell(r.regulator_field),
                                      cell(r.regulator_certified),
                                      cell(r.regulator_order),
                                      cell(r.unit_index_mod_p),
                                      cell(r.adjusted_regulator),
                                      cell(r.torus_vol_lb),
                                      cell(r.landau_env),
                                      cell(r.silverman_env),
                                      cell(r.min_geodesic_length),
                                      r.trace.get_str(),
                                      r.minor_sum.get_str(),
                                      cell(r.printed_form_agrees),
                                      quote(r.status),
                                      fmt_double(r.wall_time_ms)};
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  }
  return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  if (records.empty()) throw InsufficientData("no records to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << to_csv(records);
  if (!out) throw IoError("write failed for " + path);
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
  auto rows = split_csv(text);
  if (rows.empty()) throw ParseError("empty CSV");
  const auto& cols = csv_columns();
  if (rows[0] != cols) throw ParseError("CSV header does not match the sweep schema");
  std::vector<SweepRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != cols.size()) throw ParseError("CSV row " + std::to_string(i) + " has wrong column count");
    SweepRecord r;
    auto p = read_int(c[0]);
    if (!p || !p->fits_ulong_p()) throw ParseError("bad prime in CSV row " + std::to_string(i));
    r.p = p->get_ui();
    r.disc_poly = read_int(c[1]);
    r.disc_field = read_int(c[2]);
    r.order_index = read_int(c[3]);
    r.n_real_roots = static_cast<int>(read_int(c[4]).value_or(0).get_si());
    r.r_regular = read_bool(c[5]);
    r.hyper_regular = read_bool(c[6]);
    r.regulator_field = read_num(c[7]);
    r.regulator_certified = read_bool(c[8]);
    r.regulator_order = read_num(c[9]);
    r.unit_index_mod_p = read_int(c[10]);
    r.adjusted_regulator = read_num(c[11]);
    r.torus_vol_lb = read_num(c[12]);
    r.landau_env = read_num(c[13]);
    r.silverman_env = read_num(c[14]);
    r.min_geodesic_length = read_num(c[15]);
    r.trace = read_int(c[16]).value_or(0);
    r.minor_sum = read_int(c[17]).value_or(0);
    r.printed_form_agrees = read_bool(c[18]);
    r.status = c[19];
    r.wall_time_ms = read_num(c[20]).value_or(0.0);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text);
}

}  // namespace systolab::pipeline
