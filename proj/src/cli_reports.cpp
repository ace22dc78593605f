#include "orbitq/cli_reports.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace orbitq::cli_reports {

namespace {

using json = nlohmann::json;
using orbit_catalog::GroupKind;
using orbit_catalog::OrbitSpec;

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const char* group_token(GroupKind g) {
  switch (g) {
    case GroupKind::GL:
      return "gl";
    case GroupKind::O:
      return "o";
    case GroupKind::Sp:
      return "sp";
  }
  return "?";
}

GroupKind parse_group(const std::string& tok) {
  if (tok == "gl" || tok == "GL") return GroupKind::GL;
  if (tok == "o" || tok == "O") return GroupKind::O;
  if (tok == "sp" || tok == "Sp" || tok == "SP") return GroupKind::Sp;
  fail(ErrorCode::InvalidInput, "unknown group '" + tok + "'");
}

std::vector<int> parse_partition(const std::string& tok) {
  std::vector<int> parts;
  std::string cur;
  for (char c : tok + ",") {
    if (c == ',') {
      if (cur.empty()) fail(ErrorCode::InvalidInput, "empty partition entry");
      parts.push_back(std::stoi(cur));
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      cur += c;
    } else {
      fail(ErrorCode::InvalidInput,
           "bad partition character '" + std::string(1, c) + "'");
    }
  }
  return parts;
}

json spec_json(const OrbitSpec& spec) {
  json j;
  j["group"] = group_token(spec.group);
  j["n"] = spec.n;
  j["partition"] = spec.partition;
  j["name"] = spec.name();
  j["components"] = spec.components;
  j["very_even"] = spec.very_even;
  return j;
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

json base_report(const std::string& command) {
  json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["command"] = command;
  return j;
}

void finish_report(json& j, const ReportOptions& opt,
                   std::chrono::steady_clock::time_point t0,
                   const Cache* cache) {
  if (opt.stable) return;
  j["timing_ms"] = elapsed_ms(t0);
  if (cache != nullptr) {
    j["cache"] = {{"dir", cache->dir()},
                  {"hits", cache->hits()},
                  {"misses", cache->misses()}};
  }
}

std::string cache_key_name(const std::string& spec_name,
                           const std::string& module, int degree,
                           const std::string& material) {
  std::string safe;
  for (char c : spec_name) {
    safe += std::isalnum(static_cast<unsigned char>(c)) ? c : '-';
  }
  std::ostringstream os;
  os << safe << "_" << module << "_" << degree << "_" << fnv1a_hex(material)
     << ".json";
  return os.str();
}

std::string model_cache_material(const kp_model::KPModel& model,
                                 const std::string& module,
                                 const std::string& params) {
  std::ostringstream os;
  os << model.convention_summary() << "|" << module << "|" << params
     << "|cache_format=" << kCacheFormat;
  return os.str();
}

// Fetches a cached row or computes and stores it.
json cached_row(Cache& cache, const std::string& key,
                const std::function<json()>& compute) {
  if (auto text = cache.get(key)) {
    return json::parse(*text);
  }
  json row = compute();
  cache.put(key, row.dump());
  return row;
}

json hilbert_row_json(reduction_classical::Reduction& red, int j) {
  auto row = red.hilbert_row(j);
  json r;
  r["j"] = row.j;
  r["dim_p"] = row.dim_p.get_str();
  r["dim_inv"] = row.dim_inv;
  r["dim_ideal"] = row.dim_ideal;
  r["dim_ideal_inv"] = row.dim_ideal_inv;
  r["dim_quotient"] = row.dim_quotient;
  r["gamma_image"] = row.gamma_image;
  return r;
}

json koszul_row_json(reduction_classical::Reduction& red, int n) {
  auto row = red.koszul_row(n);
  json r;
  r["n"] = row.n;
  r["dim_p"] = row.dim_p.get_str();
  r["dim_quotient"] = row.dim_quotient;
  r["expected_quotient"] = row.expected_quotient.get_str();
  r["dim_h1"] = row.dim_h1;
  r["dim_h2"] = row.dim_h2;
  r["ci_match"] = row.dim_h1 == 0 && row.dim_h2 == 0 &&
                  mpz_class(row.dim_quotient) == row.expected_quotient;
  return r;
}

json oracle_row_json(const OrbitSpec& spec, const ReportOptions& opt, int p) {
  sampling_oracle::SamplePlan plan;
  plan.spec = spec;
  plan.seed = opt.cfg.seed;
  plan.height = opt.cfg.height;
  plan.count = opt.cfg.count;
  auto res = sampling_oracle::orbit_coordinate_dim(plan, p);
  json r;
  r["degree"] = p;
  r["dim"] = res.dim;
  r["points_used"] = res.points_used;
  r["columns"] = res.columns;
  return r;
}

std::string oracle_params(const ReportOptions& opt) {
  std::ostringstream os;
  os << "seed=" << opt.cfg.seed << ";height=" << opt.cfg.height
     << ";count=" << opt.cfg.count;
  return os.str();
}

json dixmier_row_json(dixmier_b::BAlgebra& alg, int d) {
  const auto& row = alg.row(d);
  json r;
  r["d"] = row.d;
  r["slack"] = row.slack;
  r["dim_weven"] = row.dim_weven;
  r["dim_winv"] = row.dim_winv;
  r["dim_mpart"] = row.dim_mpart;
  r["dim_b"] = row.dim_b;
  r["dim_b_invariant"] = row.dim_b_invariant;
  r["gr_b"] = row.gr_b;
  r["predicted"] = row.predicted;
  r["match"] = row.match;
  return r;
}

struct BatchJob {
  OrbitSpec spec;
  int pmax = 3;
  int dmax = 2;
  int slack = 1;
  std::uint64_t seed = sampling_oracle::kDefaultSeed;
};

std::vector<BatchJob> parse_batch_file(const std::string& path,
                                       const ReportOptions& opt) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::InvalidInput, "cannot open batch file '" + path + "'");
  }
  std::vector<BatchJob> jobs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::istringstream ls(text);
    std::string gtok, ntok, ptok;
    ls >> gtok >> ntok >> ptok;
    BatchJob job;
    job.pmax = opt.cfg.kp_pmax;
    job.dmax = opt.cfg.dixmier_dmax;
    job.slack = opt.cfg.slack;
    job.seed = opt.cfg.seed;
    try {
      if (gtok.empty() || ntok.empty() || ptok.empty()) {
        fail(ErrorCode::InvalidInput, "expected 'GROUP N PARTITION ...'");
      }
      GroupKind g = parse_group(gtok);
      std::size_t n = static_cast<std::size_t>(std::stoul(ntok));
      job.spec = orbit_catalog::validate(g, n, parse_partition(ptok));
      std::string kv;
      while (ls >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
          fail(ErrorCode::InvalidInput, "expected key=value, got '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "pmax") {
          job.pmax = std::stoi(val);
        } else if (key == "dmax") {
          job.dmax = std::stoi(val);
        } else if (key == "slack") {
          job.slack = std::stoi(val);
        } else if (key == "seed") {
          job.seed = std::stoull(val);
        } else {
          fail(ErrorCode::InvalidInput, "unknown batch key '" + key + "'");
        }
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "batch line " << lineno << ": " << e.what();
      fail(ErrorCode::InvalidInput, os.str());
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "batch line " << lineno << ": " << e.what();
      fail(ErrorCode::InvalidInput, os.str());
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

}  // namespace

void Config::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::InvalidInput, "cannot open config file '" + path + "'");
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << lineno << ": expected key = value";
      fail(ErrorCode::InvalidInput, os.str());
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    try {
      set(key, val);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "config line " << lineno << ": " << e.what();
      fail(ErrorCode::InvalidInput, os.str());
    }
  }
}

void Config::set(const std::string& key, const std::string& value) {
  try {
    if (key == "hilbert_jmax") {
      hilbert_jmax = std::stoi(value);
    } else if (key == "koszul_nmax") {
      koszul_nmax = std::stoi(value);
    } else if (key == "kp_pmax") {
      kp_pmax = std::stoi(value);
    } else if (key == "dixmier_dmax") {
      dixmier_dmax = std::stoi(value);
    } else if (key == "slack") {
      slack = std::stoi(value);
    } else if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "height") {
      height = std::stol(value);
    } else if (key == "count") {
      count = std::stoul(value);
    } else if (key == "cache_dir") {
      cache_dir = value;
    } else if (key == "workers") {
      workers = static_cast<unsigned>(std::stoul(value));
    } else {
      fail(ErrorCode::InvalidInput, "unknown config key '" + key + "'");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidInput,
         "bad value '" + value + "' for config key '" + key + "'");
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string Cache::default_dir() {
  if (const char* env = std::getenv("ORBITQ_CACHE_DIR")) {
    if (*env != '\0') return env;
  }
  if (const char* home = std::getenv("HOME")) {
    if (*home != '\0') {
      return std::string(home) + "/.cache/orbitq";
    }
  }
  return "/tmp/orbitq-cache";
}

Cache::Cache(std::string dir) : dir_(dir.empty() ? default_dir() : std::move(dir)) {}

std::string Cache::path_for(const std::string& key) const {
  return dir_ + "/" + key;
}

std::optional<std::string> Cache::get(const std::string& key) {
  const std::string path = path_for(key);
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) {
    std::lock_guard<std::mutex> lock(mu_);
    ++misses_;
    return std::nullopt;
  }
  ::flock(fd, LOCK_SH);
  std::string text;
  char buf[4096];
  ssize_t got;
  while ((got = ::read(fd, buf, sizeof(buf))) > 0) {
    text.append(buf, static_cast<std::size_t>(got));
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
  std::lock_guard<std::mutex> lock(mu_);
  ++hits_;
  return text;
}

void Cache::put(const std::string& key, const std::string& value) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    fail(ErrorCode::CacheError,
         "cannot create cache directory '" + dir_ + "': " + ec.message());
  }
  const std::string path = path_for(key);
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT, 0644);
  if (fd < 0) {
    fail(ErrorCode::CacheError, "cannot open cache file '" + path + "'");
  }
  ::flock(fd, LOCK_EX);
  if (::ftruncate(fd, 0) != 0 ||
      ::write(fd, value.data(), value.size()) !=
          static_cast<ssize_t>(value.size())) {
    ::flock(fd, LOCK_UN);
    ::close(fd);
    fail(ErrorCode::CacheError, "cannot write cache file '" + path + "'");
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

std::size_t Cache::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

std::size_t Cache::misses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return misses_;
}

Session::Session(const OrbitSpec& spec)
    : spec_(spec),
      model_(std::make_unique<kp_model::KPModel>(kp_model::build_model(spec))) {}

weyl_quant::Quantization& Session::quantization() {
  if (!quant_) {
    quant_ = std::make_unique<weyl_quant::Quantization>(*model_);
  }
  return *quant_;
}

reduction_classical::Reduction& Session::reduction() {
  if (!red_) {
    red_ = std::make_unique<reduction_classical::Reduction>(*model_);
  }
  return *red_;
}

dixmier_b::BAlgebra& Session::algebra(int max_slack) {
  if (!alg_ || alg_slack_ != max_slack) {
    alg_ = std::make_unique<dixmier_b::BAlgebra>(quantization(), max_slack);
    alg_slack_ = max_slack;
  }
  return *alg_;
}

std::string orbits_list_json(GroupKind group, std::size_t n,
                             const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("orbits list");
  j["group"] = group_token(group);
  j["n"] = n;
  json rows = json::array();
  for (const auto& spec : orbit_catalog::valid_orbits(group, n)) {
    json r;
    std::ostringstream ps;
    for (std::size_t i = 0; i < spec.partition.size(); ++i) {
      if (i) ps << ",";
      ps << spec.partition[i];
    }
    r["partition"] = ps.str();
    r["components"] = spec.components;
    r["very_even"] = spec.very_even;
    r["orbit_dim"] = orbit_catalog::orbit_dimension(spec);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  finish_report(j, opt, t0, nullptr);
  return j.dump();
}

std::string orbits_info_json(const OrbitSpec& spec, const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("orbits info");
  j["spec"] = spec_json(spec);
  auto lad = orbit_catalog::ladder(spec);
  j["orbit_dim"] = orbit_catalog::orbit_dimension(spec);
  json rows = json::array();
  for (std::size_t e = 0; e < lad.dims.size(); ++e) {
    json r;
    r["level"] = e;
    r["dim"] = lad.dims[e];
    switch (lad.forms[e]) {
      case orbit_catalog::FormKind::None:
        r["form"] = "none";
        break;
      case orbit_catalog::FormKind::Orthogonal:
        r["form"] = "orthogonal";
        break;
      case orbit_catalog::FormKind::Symplectic:
        r["form"] = "symplectic";
        break;
    }
    r["acting"] = group_token(lad.s_levels[e]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  finish_report(j, opt, t0, nullptr);
  return j.dump();
}

std::string model_json(Session& s, const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const auto& model = s.model();
  json j = base_report("model build");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = model.convention_summary();
  j["dim_L"] = model.dim_L();
  j["dim_g"] = model.dim_g();
  j["dim_s"] = model.dim_s();
  j["frame_pairs"] = model.q_vars.size();
  j["reflections"] = model.reflections.size();
  j["has_level0_reflection"] = model.has_g_reflection;
  j["orbit_dim_model"] = model.dim_L() - 2 * model.dim_s();
  j["orbit_dim_centralizer"] = orbit_catalog::orbit_dimension(s.spec());
  j["pass"] = j["orbit_dim_model"] == j["orbit_dim_centralizer"];
  finish_report(j, opt, t0, nullptr);
  return j.dump();
}

std::string hilbert_json(Session& s, int jmax, Cache& cache,
                         const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("hilbert");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = s.model().convention_summary();
  j["window"] = {{"jmax", jmax}};
  json rows = json::array();
  for (int deg = 0; deg <= jmax; ++deg) {
    const std::string key =
        cache_key_name(s.spec().name(), "hilbert", deg,
                       model_cache_material(s.model(), "hilbert", ""));
    rows.push_back(
        cached_row(cache, key, [&] { return hilbert_row_json(s.reduction(), deg); }));
  }
  j["rows"] = std::move(rows);
  finish_report(j, opt, t0, &cache);
  return j.dump();
}

std::string koszul_json(Session& s, int nmax, Cache& cache,
                        const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("koszul");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = s.model().convention_summary();
  j["window"] = {{"nmax", nmax}};
  json rows = json::array();
  bool pass = true;
  for (int deg = 0; deg <= nmax; ++deg) {
    const std::string key =
        cache_key_name(s.spec().name(), "koszul", deg,
                       model_cache_material(s.model(), "koszul", ""));
    json r = cached_row(cache, key,
                        [&] { return koszul_row_json(s.reduction(), deg); });
    pass = pass && r["ci_match"].get<bool>();
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["pass"] = pass;
  finish_report(j, opt, t0, &cache);
  return j.dump();
}

std::string oracle_json(const OrbitSpec& spec, int pmax, Cache& cache,
                        const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("oracle dim");
  j["spec"] = spec_json(spec);
  j["window"] = {{"pmax", pmax}};
  j["plan"] = {{"seed", opt.cfg.seed},
               {"height", opt.cfg.height},
               {"count", opt.cfg.count}};
  json rows = json::array();
  for (int p = 0; p <= pmax; ++p) {
    const std::string key = cache_key_name(
        spec.name(), "oracle", p,
        "oracle|" + spec.name() + "|" + oracle_params(opt) +
            "|cache_format=" + std::to_string(kCacheFormat));
    rows.push_back(
        cached_row(cache, key, [&] { return oracle_row_json(spec, opt, p); }));
  }
  j["rows"] = std::move(rows);
  finish_report(j, opt, t0, &cache);
  return j.dump();
}

std::string verify_kp_json(Session& s, int pmax, Cache& cache,
                           const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("verify kp");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = s.model().convention_summary();
  j["window"] = {{"pmax", pmax}};
  j["plan"] = {{"seed", opt.cfg.seed},
               {"height", opt.cfg.height},
               {"count", opt.cfg.count}};
  json rows = json::array();
  bool pass = true;
  for (int p = 0; p <= pmax; ++p) {
    const std::string hkey =
        cache_key_name(s.spec().name(), "hilbert", p,
                       model_cache_material(s.model(), "hilbert", ""));
    json hrow = cached_row(cache, hkey,
                           [&] { return hilbert_row_json(s.reduction(), p); });
    const std::string okey = cache_key_name(
        s.spec().name(), "oracle", p,
        "oracle|" + s.spec().name() + "|" + oracle_params(opt) +
            "|cache_format=" + std::to_string(kCacheFormat));
    json orow = cached_row(cache, okey,
                           [&] { return oracle_row_json(s.spec(), opt, p); });
    json r;
    r["j"] = p;
    r["classical"] = hrow["dim_quotient"];
    r["oracle"] = orow["dim"];
    r["points_used"] = orow["points_used"];
    r["match"] = hrow["dim_quotient"] == orow["dim"];
    pass = pass && r["match"].get<bool>();
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["pass"] = pass;
  finish_report(j, opt, t0, &cache);
  return j.dump();
}

std::string verify_dixmier_json(Session& s, int dmax, Cache& cache,
                                const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("verify dixmier");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = s.model().convention_summary();
  j["window"] = {{"dmax", dmax}, {"max_slack", opt.cfg.slack}};
  json rows = json::array();
  bool pass = true;
  std::ostringstream params;
  params << "max_slack=" << opt.cfg.slack;
  for (int d = 0; d <= dmax; ++d) {
    const std::string key =
        cache_key_name(s.spec().name(), "dixmier", d,
                       model_cache_material(s.model(), "dixmier", params.str()));
    json r = cached_row(cache, key, [&] {
      return dixmier_row_json(s.algebra(opt.cfg.slack), d);
    });
    pass = pass && r["match"].get<bool>();
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["pass"] = pass;
  finish_report(j, opt, t0, &cache);
  return j.dump();
}

std::string form_json(Session& s, int d, const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("form");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = s.model().convention_summary();
  j["d"] = d;
  auto& alg = s.algebra(opt.cfg.slack);
  auto g = alg.gram(d);
  const bool herm = g == g.conj_transpose();
  json rows = json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    json row;
    row["i"] = r;
    json entries = json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) {
      entries.push_back(g.at(r, c).str());
    }
    row["entries"] = std::move(entries);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["hermitian"] = herm;
  if (herm) {
    auto [np, nm, nz] = exact_linalg::hermitian_signature(g);
    j["signature"] = {{"plus", np}, {"minus", nm}, {"zero", nz}};
    j["positive_definite"] = nm == 0 && nz == 0;
  }
  j["pass"] = herm;
  finish_report(j, opt, t0, nullptr);
  return j.dump();
}

std::string casimir_json(Session& s, const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  json j = base_report("casimir");
  j["spec"] = spec_json(s.spec());
  j["conventions"] = s.model().convention_summary();
  auto& alg = s.algebra(opt.cfg.slack);
  exact_linalg::Scalar c = alg.casimir_scalar();
  j["scalar"] = c.str();
  j["basis_independent"] = true;  // enforced inside the computation
  j["pass"] = true;
  finish_report(j, opt, t0, nullptr);
  return j.dump();
}

std::string batch_json(const std::string& path, Cache& cache,
                       const ReportOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  auto jobs = parse_batch_file(path, opt);
  json j = base_report("batch");
  j["file"] = path;
  std::vector<json> results(jobs.size());
  std::atomic<std::size_t> next{0};
  unsigned workers = opt.cfg.workers;
  if (workers == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : hw;
  }
  if (workers > jobs.size()) workers = static_cast<unsigned>(jobs.size());
  if (workers == 0) workers = 1;
  auto run_one = [&](std::size_t k) {
    const BatchJob& job = jobs[k];
    json r;
    r["spec"] = job.spec.name();
    try {
      ReportOptions jopt = opt;
      jopt.cfg.seed = job.seed;
      jopt.cfg.slack = job.slack;
      Session session(job.spec);
      const bool kp_ok =
          report_passed(verify_kp_json(session, job.pmax, cache, jopt));
      const bool dx_ok =
          report_passed(verify_dixmier_json(session, job.dmax, cache, jopt));
      r["kp"] = kp_ok;
      r["dixmier"] = dx_ok;
      r["pass"] = kp_ok && dx_ok;
    } catch (const Error& e) {
      r["pass"] = false;
      r["error"] = std::string(error_code_name(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      r["pass"] = false;
      r["error"] = e.what();
    }
    results[k] = std::move(r);
  };
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs.size(); ++k) run_one(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= jobs.size()) return;
          run_one(k);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  json rows = json::array();
  bool pass = true;
  for (auto& r : results) {
    pass = pass && r.value("pass", false);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["jobs"] = jobs.size();
  j["pass"] = pass;
  finish_report(j, opt, t0, &cache);
  return j.dump();
}

bool report_passed(const std::string& report) {
  json j = json::parse(report);
  return j.contains("pass") && j["pass"].is_boolean() && j["pass"].get<bool>();
}

namespace {

const std::vector<std::string>& columns_for(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"orbits list", {"partition", "components", "very_even", "orbit_dim"}},
      {"orbits info", {"level", "dim", "form", "acting"}},
      {"hilbert",
       {"j", "dim_p", "dim_inv", "dim_ideal", "dim_ideal_inv", "dim_quotient",
        "gamma_image"}},
      {"koszul",
       {"n", "dim_p", "dim_quotient", "expected_quotient", "dim_h1", "dim_h2",
        "ci_match"}},
      {"oracle dim", {"degree", "dim", "points_used", "columns"}},
      {"verify kp", {"j", "classical", "oracle", "points_used", "match"}},
      {"verify dixmier",
       {"d", "slack", "dim_weven", "dim_winv", "dim_mpart", "dim_b",
        "dim_b_invariant", "gr_b", "predicted", "match"}},
      {"batch", {"spec", "kp", "dixmier", "pass", "error"}},
  };
  static const std::vector<std::string> empty;
  auto it = table.find(command);
  return it == table.end() ? empty : it->second;
}

std::string cell_text(const json& row, const std::string& key) {
  if (!row.contains(key)) return "";
  const json& v = row.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_csv(const std::string& report) {
  json j = json::parse(report);
  const std::string command = j.value("command", "");
  std::ostringstream os;
  if (command == "form") {
    // One line per basis element, entries as exact scalars.
    os << "i";
    if (j.contains("rows") && !j["rows"].empty()) {
      const auto n = j["rows"][0]["entries"].size();
      for (std::size_t c = 0; c < n; ++c) os << ",e" << c;
    }
    os << "\n";
    for (const auto& row : j["rows"]) {
      os << row["i"].get<std::size_t>();
      for (const auto& e : row["entries"]) {
        os << "," << csv_escape(e.get<std::string>());
      }
      os << "\n";
    }
    return os.str();
  }
  if (command == "casimir") {
    os << "scalar,basis_independent\n"
       << csv_escape(j["scalar"].get<std::string>()) << ","
       << (j["basis_independent"].get<bool>() ? "yes" : "no") << "\n";
    return os.str();
  }
  if (command == "model build") {
    os << "dim_L,dim_g,dim_s,frame_pairs,reflections,orbit_dim\n"
       << j["dim_L"] << "," << j["dim_g"] << "," << j["dim_s"] << ","
       << j["frame_pairs"] << "," << j["reflections"] << ","
       << j["orbit_dim_model"] << "\n";
    return os.str();
  }
  const auto& cols = columns_for(command);
  if (cols.empty() || !j.contains("rows")) {
    fail(ErrorCode::InvalidInput,
         "no CSV rendering for command '" + command + "'");
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    os << (c ? "," : "") << cols[c];
  }
  os << "\n";
  for (const auto& row : j["rows"]) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      os << (c ? "," : "") << csv_escape(cell_text(row, cols[c]));
    }
    os << "\n";
  }
  return os.str();
}

std::string render_human(const std::string& report) {
  json j = json::parse(report);
  const std::string command = j.value("command", "");
  std::ostringstream os;
  os << kToolName << " " << command;
  if (j.contains("spec")) os << "  " << j["spec"]["name"].get<std::string>();
  os << "\n";
  if (j.contains("window")) {
    os << "window:";
    for (auto& [k, v] : j["window"].items()) os << " " << k << "=" << v;
    os << "\n";
  }
  if (command == "model build") {
    os << "dim_L=" << j["dim_L"] << " dim_g=" << j["dim_g"]
       << " dim_s=" << j["dim_s"] << " frame_pairs=" << j["frame_pairs"]
       << " reflections=" << j["reflections"]
       << " level0_reflection=" << (j["has_level0_reflection"].get<bool>() ? "yes" : "no")
       << "\norbit dimension: model=" << j["orbit_dim_model"]
       << " centralizer=" << j["orbit_dim_centralizer"] << "\n";
  } else if (command == "casimir") {
    os << "casimir scalar: " << j["scalar"].get<std::string>()
       << " (basis independent)\n";
  } else if (command == "form") {
    os << "gram dimension " << j["rows"].size() << ", hermitian: "
       << (j["hermitian"].get<bool>() ? "yes" : "no");
    if (j.contains("signature")) {
      os << ", signature (+" << j["signature"]["plus"] << ", -"
         << j["signature"]["minus"] << ", 0:" << j["signature"]["zero"] << ")";
    }
    os << "\n";
    for (const auto& row : j["rows"]) {
      os << " [";
      bool first = true;
      for (const auto& e : row["entries"]) {
        os << (first ? "" : ", ") << e.get<std::string>();
        first = false;
      }
      os << "]\n";
    }
  } else {
    const auto& cols = columns_for(command);
    if (!cols.empty() && j.contains("rows")) {
      std::vector<std::size_t> widths(cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) widths[c] = cols[c].size();
      std::vector<std::vector<std::string>> cells;
      for (const auto& row : j["rows"]) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < cols.size(); ++c) {
          line.push_back(cell_text(row, cols[c]));
          widths[c] = std::max(widths[c], line.back().size());
        }
        cells.push_back(std::move(line));
      }
      auto pad = [&](const std::string& s, std::size_t w) {
        return s + std::string(w - s.size(), ' ');
      };
      for (std::size_t c = 0; c < cols.size(); ++c) {
        os << (c ? "  " : "") << pad(cols[c], widths[c]);
      }
      os << "\n";
      for (const auto& line : cells) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          os << (c ? "  " : "") << pad(line[c], widths[c]);
        }
        os << "\n";
      }
    }
  }
  if (j.contains("pass")) {
    os << (j["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  }
  if (j.contains("timing_ms")) {
    os << "elapsed " << j["timing_ms"] << " ms";
    if (j.contains("cache")) {
      os << ", cache hits " << j["cache"]["hits"] << " misses "
         << j["cache"]["misses"];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace orbitq::cli_reports
