#pragma once

// Report construction, caching, configuration, and batch running on top of
// the computation engines.  Every report is produced as a deterministic
// JSON string (sorted keys, exact scalars rendered as strings); the
// "stable" flag omits timing and cache-statistics fields so that reruns
// with identical inputs are byte-identical.  A small on-disk cache stores
// per-degree result rows keyed by the model's convention fingerprint and a
// format version, with advisory file locking for concurrent use.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "orbitq/dixmier_b.hpp"
#include "orbitq/kp_model.hpp"
#include "orbitq/orbit_catalog.hpp"
#include "orbitq/reduction_classical.hpp"
#include "orbitq/sampling_oracle.hpp"
#include "orbitq/weyl_quant.hpp"

namespace orbitq::cli_reports {

inline constexpr const char* kToolName = "orbitq";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCacheFormat = 1;

// Key-value configuration (defaults for windows, sampling, cache, batch).
struct Config {
  int hilbert_jmax = 3;
  int koszul_nmax = 6;
  int kp_pmax = 3;
  int dixmier_dmax = 2;
  int slack = 1;                                      // escalation bound
  std::uint64_t seed = sampling_oracle::kDefaultSeed;
  long height = 3;
  std::size_t count = 0;                              // 0 = auto
  std::string cache_dir;                              // "" = default
  unsigned workers = 0;                               // 0 = hardware

  // Parses "key = value" lines ('#' comments, blank lines ignored) and
  // overwrites the matching fields.  Unknown keys throw InvalidInput.
  void merge_file(const std::string& path);

  // Applies one key/value pair (same keys as merge_file).  Unknown keys
  // or unparsable values throw InvalidInput.
  void set(const std::string& key, const std::string& value);
};

// On-disk row cache: one file per key, advisory flock locking (shared
// readers, exclusive writer).  Thread-safe.
class Cache {
 public:
  // Precedence: explicit dir, else ORBITQ_CACHE_DIR, else a per-user
  // default directory.
  explicit Cache(std::string dir = "");
  static std::string default_dir();

  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, const std::string& value);

  const std::string& dir() const { return dir_; }
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  std::string path_for(const std::string& key) const;
  std::string dir_;
  mutable std::mutex mu_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

// FNV-1a 64-bit content hash, as fixed-width hex.
std::string fnv1a_hex(const std::string& text);

// Engine bundle for one spec; sub-engines are built on first use.
class Session {
 public:
  explicit Session(const orbit_catalog::OrbitSpec& spec);

  const orbit_catalog::OrbitSpec& spec() const { return spec_; }
  const kp_model::KPModel& model() const { return *model_; }
  weyl_quant::Quantization& quantization();
  reduction_classical::Reduction& reduction();
  dixmier_b::BAlgebra& algebra(int max_slack);

 private:
  orbit_catalog::OrbitSpec spec_;
  std::unique_ptr<kp_model::KPModel> model_;
  std::unique_ptr<weyl_quant::Quantization> quant_;
  std::unique_ptr<reduction_classical::Reduction> red_;
  std::unique_ptr<dixmier_b::BAlgebra> alg_;
  int alg_slack_ = -1;
};

struct ReportOptions {
  Config cfg;
  bool stable = false;
};

// Report builders.  Each returns a complete JSON document; "pass" carries
// the verification outcome where one exists.
std::string orbits_list_json(orbit_catalog::GroupKind group, std::size_t n,
                             const ReportOptions& opt);
std::string orbits_info_json(const orbit_catalog::OrbitSpec& spec,
                             const ReportOptions& opt);
std::string model_json(Session& s, const ReportOptions& opt);
std::string hilbert_json(Session& s, int jmax, Cache& cache,
                         const ReportOptions& opt);
std::string koszul_json(Session& s, int nmax, Cache& cache,
                        const ReportOptions& opt);
std::string oracle_json(const orbit_catalog::OrbitSpec& spec, int pmax,
                        Cache& cache, const ReportOptions& opt);
std::string verify_kp_json(Session& s, int pmax, Cache& cache,
                           const ReportOptions& opt);
std::string verify_dixmier_json(Session& s, int dmax, Cache& cache,
                                const ReportOptions& opt);
std::string form_json(Session& s, int d, const ReportOptions& opt);
std::string casimir_json(Session& s, const ReportOptions& opt);
// Batch file: one job per line, "GROUP N PARTITION [key=value ...]" with
// keys pmax, dmax, seed, slack.  '#' comments and blank lines are skipped.
// A malformed line throws InvalidInput naming the line number.  Jobs run
// on a worker pool; the report carries one summary row per job.
std::string batch_json(const std::string& path, Cache& cache,
                       const ReportOptions& opt);

// True when the report's "pass" field is present and true.
bool report_passed(const std::string& report);
// CSV rendering of the report's row table (header + one line per row).
std::string to_csv(const std::string& report);
// Terminal rendering (aligned columns, summary line).
std::string render_human(const std::string& report);

}  // namespace orbitq::cli_reports
