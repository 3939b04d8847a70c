#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "systolab/factor.hpp"
#include "systolab/geometry.hpp"
#include "systolab/units.hpp"

namespace systolab::pipeline {

inline constexpr const char* kSchemaVersion = "systolab-sweep-v1";

struct SweepConfig {
  std::size_t prime_count = 10;
  int precision_bits = 128;
  int threads = 0;  // 0: OpenMP default
  FactorBudget factor;
  numfield::UnitSearchOptions units;
  std::uint64_t order_index_cap = 1000000;
  geometry::EnvelopeParams envelope;
  double metric_c = 1.0;
  std::string cache_path;
  std::string csv_path;
  std::string json_path;

  void validate() const;
};

/// Reads flat key=value lines (# comments allowed). Known keys: c1, c2,
/// gamma_n, metric_c, prec, threads. Throws IoError / ParseError.
void apply_config_file(SweepConfig& config, const std::string& path);
/// SYSTOLAB_PREC and SYSTOLAB_THREADS.
void apply_environment(SweepConfig& config);

/// One row of the regulator sweep. Empty optionals serialize as empty cells;
/// `status` says why.
struct SweepRecord {
  std::uint64_t p = 0;
  std::optional<mpz_class> disc_poly;
  std::optional<mpz_class> disc_field;
  std::optional<mpz_class> order_index;
  int n_real_roots = 0;
  bool r_regular = false;
  bool hyper_regular = false;
  std::optional<double> regulator_field;
  bool regulator_certified = false;
  std::optional<double> regulator_order;  // regulator of the units of Z[mu]
  std::optional<mpz_class> unit_index_mod_p;
  std::optional<double> adjusted_regulator;
  std::optional<double> torus_vol_lb;
  std::optional<double> landau_env;
  std::optional<double> silverman_env;
  std::optional<double> min_geodesic_length;
  mpz_class trace;
  mpz_class minor_sum;
  bool printed_form_agrees = false;
  std::string status;
  double wall_time_ms = 0.0;

  bool budget_exhausted() const { return status.rfind("budget", 0) == 0; }
  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Column names in CSV order.
const std::vector<std::string>& csv_columns();

/// Computes the record for one prime; errors are captured in `status`.
SweepRecord compute_record(std::uint64_t p, const SweepConfig& config);

/// Append-only JSON-lines store keyed on (p, precision, schema version).
class RecordCache {
 public:
  RecordCache() = default;
  /// Loads `path` if it exists. Throws IoError if it cannot be created.
  explicit RecordCache(std::string path);

  std::optional<SweepRecord> get(std::uint64_t p, int precision_bits,
                                 const std::string& schema = kSchemaVersion) const;
  void put(const SweepRecord& record, int precision_bits, const std::string& schema = kSchemaVersion);

  std::size_t size() const;
  std::size_t corrupt_lines() const { return corrupt_; }

 private:
  using Key = std::tuple<std::uint64_t, int, std::string>;
  std::string path_;
  std::map<Key, SweepRecord> entries_;
  std::size_t corrupt_ = 0;
  mutable std::mutex mu_;
};

struct SweepStats {
  std::size_t computed = 0;
  std::size_t cached = 0;
  std::size_t corrupt_cache_lines = 0;
  std::size_t budget_exhausted = 0;
};

/// One record per prime among the first config.prime_count, sorted by p.
/// Records missing from the cache are computed in parallel.
std::vector<SweepRecord> sweep(const SweepConfig& config, SweepStats* stats = nullptr);
/// Single-threaded reference for sweep.
std::vector<SweepRecord> sweep_serial(const SweepConfig& config, SweepStats* stats = nullptr);

std::string to_csv(const std::vector<SweepRecord>& records);
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);
std::vector<SweepRecord> parse_csv(const std::string& text);
std::vector<SweepRecord> read_csv(const std::string& path);
void emit_json(const std::vector<SweepRecord>& records, const std::string& path);
std::string record_to_json(const SweepRecord& r);
SweepRecord record_from_json(const std::string& text);

/// Envelope constants fitted to certified records: upper = max R/(sqrt(D) log^2 D),
/// lower = min R/log^2 D. Throws InsufficientData for fewer than 2 records.
struct EnvelopeFit {
  double upper = 0.0;
  double lower = 0.0;
  std::size_t points = 0;
};
EnvelopeFit fit_envelopes(const std::vector<SweepRecord>& records);

enum class XAxis { Prime, Discriminant };

struct PlotOptions {
  XAxis x_axis = XAxis::Prime;
  bool envelopes = true;
  std::string title = "Regulators of the centralizer fields of gamma_p";
};

std::string render_svg(const std::vector<SweepRecord>& records, const PlotOptions& options);
void emit_plot(const std::vector<SweepRecord>& records, const std::string& path, const PlotOptions& options);

}  // namespace systolab::pipeline
