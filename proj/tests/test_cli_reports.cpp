#include "doctest.h"
#include "orbitq/cli_reports.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace orbitq;
using namespace orbitq::cli_reports;
using orbit_catalog::GroupKind;
using orbit_catalog::validate;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("orbitq-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int counter() {
    static int n = 0;
    return n++;
  }
  std::string str() const { return path.string(); }
};

std::string write_temp(const TempDir& dir, const std::string& name,
                       const std::string& text) {
  auto p = dir.path / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("config parsing: round trip, comments, failures") {
  TempDir dir;
  Config cfg;
  auto path = write_temp(dir, "good.cfg",
                         "# comment\n"
                         "kp_pmax = 2\n"
                         "seed=99\n"
                         "cache_dir = /tmp/somewhere\n"
                         "\n"
                         "workers = 3\n");
  cfg.merge_file(path);
  CHECK(cfg.kp_pmax == 2);
  CHECK(cfg.seed == 99);
  CHECK(cfg.cache_dir == "/tmp/somewhere");
  CHECK(cfg.workers == 3);
  CHECK(cfg.hilbert_jmax == 3);  // untouched default

  auto bad_key = write_temp(dir, "bad1.cfg", "no_such_key = 1\n");
  CHECK_THROWS_AS(cfg.merge_file(bad_key), Error);
  auto bad_val = write_temp(dir, "bad2.cfg", "kp_pmax = banana\n");
  CHECK_THROWS_AS(cfg.merge_file(bad_val), Error);
  try {
    cfg.merge_file(bad_val);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("cache stores and reloads rows under advisory locks") {
  TempDir dir;
  Cache cache(dir.str());
  CHECK(!cache.get("alpha_test_0_00.json").has_value());
  CHECK(cache.misses() == 1);
  cache.put("alpha_test_0_00.json", "{\"v\":1}");
  auto back = cache.get("alpha_test_0_00.json");
  REQUIRE(back.has_value());
  CHECK(*back == "{\"v\":1}");
  CHECK(cache.hits() == 1);
  // A second cache over the same directory sees the value.
  Cache other(dir.str());
  CHECK(other.get("alpha_test_0_00.json").has_value());
}

TEST_CASE("content hash is stable") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
  CHECK(fnv1a_hex("orbitq").size() == 16);
}

TEST_CASE("stable reports are byte-identical between cold and warm runs") {
  TempDir dir;
  ReportOptions opt;
  opt.stable = true;
  auto spec = validate(GroupKind::GL, 2, {2});
  std::string cold_h, cold_v, cold_d, warm_h, warm_v, warm_d;
  {
    Cache cache(dir.str());
    Session s(spec);
    cold_h = hilbert_json(s, 2, cache, opt);
    cold_v = verify_kp_json(s, 1, cache, opt);
    cold_d = verify_dixmier_json(s, 2, cache, opt);
    CHECK(cache.misses() > 0);
  }
  {
    Cache cache(dir.str());
    Session s(spec);
    warm_h = hilbert_json(s, 2, cache, opt);
    warm_v = verify_kp_json(s, 1, cache, opt);
    warm_d = verify_dixmier_json(s, 2, cache, opt);
    CHECK(cache.misses() == 0);
    CHECK(cache.hits() > 0);
  }
  CHECK(cold_h == warm_h);
  CHECK(cold_v == warm_v);
  CHECK(cold_d == warm_d);
  CHECK(report_passed(cold_v));
  CHECK(report_passed(cold_d));
}

TEST_CASE("reports carry the convention fingerprint and exact scalars") {
  ReportOptions opt;
  opt.stable = true;
  auto spec = validate(GroupKind::GL, 2, {2});
  Session s(spec);
  auto rep = casimir_json(s, opt);
  CHECK(rep.find("\"scalar\":\"-1/2\"") != std::string::npos);
  CHECK(rep.find("poisson=omega_inverse") != std::string::npos);
  auto frm = form_json(s, 1, opt);
  CHECK(frm.find("\"hermitian\":true") != std::string::npos);
  CHECK(frm.find("1/6") != std::string::npos);
  CHECK(report_passed(frm));
}

TEST_CASE("csv and human renderings agree with the row data") {
  TempDir dir;
  ReportOptions opt;
  opt.stable = true;
  Cache cache(dir.str());
  auto spec = validate(GroupKind::GL, 2, {2});
  Session s(spec);
  auto rep = verify_kp_json(s, 1, cache, opt);
  auto csv = to_csv(rep);
  CHECK(csv.find("j,classical,oracle,points_used,match") == 0);
  CHECK(csv.find("\n0,1,1,") != std::string::npos);
  CHECK(csv.find("\n1,3,3,") != std::string::npos);
  auto human = render_human(rep);
  CHECK(human.find("gl2[2]") != std::string::npos);
  CHECK(human.find("PASS") != std::string::npos);
}

TEST_CASE("batch: full run, job keys, malformed lines") {
  TempDir dir;
  ReportOptions opt;
  opt.stable = true;
  opt.cfg.workers = 2;
  Cache cache(dir.str());
  auto good = write_temp(dir, "jobs.txt",
                         "# two quick jobs\n"
                         "gl 2 2 pmax=1 dmax=1\n"
                         "sp 2 2 pmax=1 dmax=1 seed=5\n");
  auto rep = batch_json(good, cache, opt);
  CHECK(report_passed(rep));
  CHECK(rep.find("gl2[2]") != std::string::npos);
  CHECK(rep.find("sp2[2]") != std::string::npos);

  auto bad = write_temp(dir, "bad.txt", "gl 2 2\nsp 1 1 pmax\n");
  try {
    batch_json(bad, cache, opt);
    FAIL("malformed batch line must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  auto bad_orbit = write_temp(dir, "badorbit.txt", "sp 4 3,1\n");
  try {
    batch_json(bad_orbit, cache, opt);
    FAIL("invalid orbit in a batch line must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}
