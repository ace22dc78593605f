// Command-line front end.  Talks to the engine exclusively through the
// public C interface; all output formatting beyond plain JSON passthrough
// is delegated to the library's renderers.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbitq.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string group;
  int n = 0;
  std::vector<int> partition;
  int dmax = -1;  // -1 keeps each command's default window
  int slack = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string json_path;
  std::string csv_path;
  std::string config_path;
  std::string cache_dir;
  int workers = -1;
  bool stable = false;
};

void add_spec_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--group", args.group, "matrix group: gl, o, or sp")
      ->required()
      ->check(CLI::IsMember({"gl", "o", "sp"}));
  cmd->add_option("--n", args.n, "matrix size")->required();
  cmd->add_option("--partition", args.partition,
                  "Jordan type, comma separated (e.g. 2,1)")
      ->required()
      ->delimiter(',');
}

void add_output_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--json", args.json_path, "write the JSON report here");
  cmd->add_option("--csv", args.csv_path, "write a CSV rendering here");
  cmd->add_flag("--stable", args.stable,
                "omit timing/cache statistics for reproducible output");
  cmd->add_option("--config", args.config_path, "key = value settings file");
  cmd->add_option("--cache-dir", args.cache_dir,
                  "result cache directory (default: ORBITQ_CACHE_DIR)");
}

void add_window_option(CLI::App* cmd, CommonArgs& args, const char* help) {
  cmd->add_option("--dmax", args.dmax, help);
}

void add_engine_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--slack", args.slack,
                  "quotient truncation escalation bound (default 1)");
  auto* seed = cmd->add_option("--seed", args.seed,
                               "sampling seed (default: built-in)");
  seed->each([&args](const std::string&) { args.seed_set = true; });
}

int usage_or_failure() {
  const int code = orbitq_last_error_code();
  const bool usage = code == ORBITQ_ERR_INVALID_INPUT ||
                     code == ORBITQ_ERR_INVALID_ORBIT ||
                     code == ORBITQ_ERR_BAD_ARGUMENT;
  return usage ? kExitUsage : kExitVerifyFailed;
}

int report_error(const char* where) {
  std::cerr << "orbitq: " << where << ": "
            << orbitq_error_name(orbitq_last_error_code()) << ": "
            << orbitq_last_error_message() << "\n";
  return usage_or_failure();
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "orbitq: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return out.good();
}

// Prints/writes a finished report; returns the process exit code.
int emit(const CommonArgs& args, char* report, bool pass_matters) {
  int exit_code = kExitOk;
  char* human = nullptr;
  if (orbitq_report_human(report, &human) == ORBITQ_OK) {
    std::cout << human;
    orbitq_string_free(human);
  }
  if (!args.json_path.empty() && !write_file(args.json_path, report)) {
    exit_code = kExitVerifyFailed;
  }
  if (!args.csv_path.empty()) {
    char* csv = nullptr;
    if (orbitq_report_csv(report, &csv) == ORBITQ_OK) {
      if (!write_file(args.csv_path, csv)) exit_code = kExitVerifyFailed;
      orbitq_string_free(csv);
    } else {
      exit_code = report_error("csv");
    }
  }
  if (pass_matters && orbitq_report_passed(report) != 1) {
    exit_code = kExitVerifyFailed;
  }
  orbitq_string_free(report);
  return exit_code;
}

class SessionGuard {
 public:
  explicit SessionGuard(orbitq_session* s) : s_(s) {}
  ~SessionGuard() { orbitq_session_free(s_); }
  SessionGuard(const SessionGuard&) = delete;
  SessionGuard& operator=(const SessionGuard&) = delete;
  orbitq_session* get() const { return s_; }

 private:
  orbitq_session* s_ = nullptr;
};

orbitq_session* open_session(const CommonArgs& args) {
  orbitq_session* s = orbitq_session_new(
      args.group.c_str(), args.n, args.partition.data(),
      static_cast<int>(args.partition.size()));
  if (s == nullptr) return nullptr;
  bool ok = true;
  if (!args.config_path.empty()) {
    ok = ok && orbitq_load_config(s, args.config_path.c_str()) == ORBITQ_OK;
  }
  if (ok && !args.cache_dir.empty()) {
    ok = ok && orbitq_set_option(s, "cache_dir",
                                 args.cache_dir.c_str()) == ORBITQ_OK;
  }
  if (ok && args.seed_set) {
    ok = ok && orbitq_set_option(s, "seed",
                                 std::to_string(args.seed).c_str()) ==
                   ORBITQ_OK;
  }
  if (ok) {
    ok = orbitq_set_option(s, "slack", std::to_string(args.slack).c_str()) ==
         ORBITQ_OK;
  }
  if (ok && args.workers >= 0) {
    ok = orbitq_set_option(s, "workers",
                           std::to_string(args.workers).c_str()) == ORBITQ_OK;
  }
  if (!ok) {
    orbitq_session_free(s);
    return nullptr;
  }
  orbitq_set_stable(s, args.stable ? 1 : 0);
  return s;
}

// Command body shared by every session-bound report command.
template <typename Getter>
int run_session_command(const CommonArgs& args, const char* name,
                        bool pass_matters, Getter&& getter) {
  SessionGuard guard(open_session(args));
  if (guard.get() == nullptr) return report_error(name);
  char* report = nullptr;
  if (getter(guard.get(), &report) != ORBITQ_OK) return report_error(name);
  return emit(args, report, pass_matters);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact nilpotent-orbit workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", orbitq_version());

  CommonArgs args;
  int exit_code = kExitOk;

  // orbits list / orbits info
  auto* orbits = app.add_subcommand("orbits", "orbit catalog");
  orbits->require_subcommand(1);
  auto* olist = orbits->add_subcommand("list", "valid Jordan types");
  olist->add_option("--group", args.group, "matrix group: gl, o, or sp")
      ->required()
      ->check(CLI::IsMember({"gl", "o", "sp"}));
  olist->add_option("--n", args.n, "matrix size")->required();
  add_output_options(olist, args);
  olist->callback([&] {
    char* report = nullptr;
    if (orbitq_orbits_list(args.group.c_str(), args.n, args.stable ? 1 : 0,
                           &report) != ORBITQ_OK) {
      exit_code = report_error("orbits list");
      return;
    }
    exit_code = emit(args, report, false);
  });

  auto* oinfo = orbits->add_subcommand("info", "ladder of one orbit");
  add_spec_options(oinfo, args);
  add_output_options(oinfo, args);
  oinfo->callback([&] {
    exit_code = run_session_command(args, "orbits info", false,
                                    orbitq_orbits_info);
  });

  // model build
  auto* model = app.add_subcommand("model", "symplectic model");
  model->require_subcommand(1);
  auto* mbuild = model->add_subcommand("build", "build and cross-check");
  add_spec_options(mbuild, args);
  add_output_options(mbuild, args);
  mbuild->callback([&] {
    exit_code =
        run_session_command(args, "model build", true, orbitq_model);
  });

  // hilbert
  auto* hil = app.add_subcommand("hilbert", "graded reduction dimensions");
  add_spec_options(hil, args);
  add_window_option(hil, args, "largest natural degree (default 3)");
  add_output_options(hil, args);
  hil->callback([&] {
    const int jmax = args.dmax < 0 ? 3 : args.dmax;
    exit_code = run_session_command(
        args, "hilbert", false, [&](orbitq_session* s, char** out) {
          return orbitq_hilbert(s, jmax, out);
        });
  });

  // koszul
  auto* kos = app.add_subcommand(
      "koszul", "complete-intersection check of the momentum ideal");
  add_spec_options(kos, args);
  add_window_option(kos, args, "largest polynomial degree (default 6)");
  add_output_options(kos, args);
  kos->callback([&] {
    const int nmax = args.dmax < 0 ? 6 : args.dmax;
    exit_code = run_session_command(
        args, "koszul", true, [&](orbitq_session* s, char** out) {
          return orbitq_koszul(s, nmax, out);
        });
  });

  // oracle dim
  auto* oracle = app.add_subcommand("oracle", "randomized orbit sampling");
  oracle->require_subcommand(1);
  auto* odim = oracle->add_subcommand(
      "dim", "coordinate-function dimensions from sampled points");
  add_spec_options(odim, args);
  add_window_option(odim, args, "largest degree (default 3)");
  add_engine_options(odim, args);
  add_output_options(odim, args);
  odim->callback([&] {
    const int pmax = args.dmax < 0 ? 3 : args.dmax;
    exit_code = run_session_command(
        args, "oracle dim", false, [&](orbitq_session* s, char** out) {
          return orbitq_oracle(s, pmax, out);
        });
  });

  // verify kp / verify dixmier
  auto* verify = app.add_subcommand("verify", "dimension identities");
  verify->require_subcommand(1);
  auto* vkp = verify->add_subcommand(
      "kp", "reduction dimensions against sampled orbit dimensions");
  add_spec_options(vkp, args);
  add_window_option(vkp, args, "largest degree (default 3)");
  add_engine_options(vkp, args);
  add_output_options(vkp, args);
  vkp->callback([&] {
    const int pmax = args.dmax < 0 ? 3 : args.dmax;
    exit_code = run_session_command(
        args, "verify kp", true, [&](orbitq_session* s, char** out) {
          return orbitq_verify_kp(s, pmax, out);
        });
  });

  auto* vdx = verify->add_subcommand(
      "dixmier", "quotient algebra dimensions against classical predictions");
  add_spec_options(vdx, args);
  add_window_option(vdx, args, "largest filtration degree (default 2)");
  add_engine_options(vdx, args);
  add_output_options(vdx, args);
  vdx->callback([&] {
    const int dmax = args.dmax < 0 ? 2 : args.dmax;
    exit_code = run_session_command(
        args, "verify dixmier", true, [&](orbitq_session* s, char** out) {
          return orbitq_verify_dixmier(s, dmax, out);
        });
  });

  // form
  auto* form = app.add_subcommand("form", "invariant sesquilinear form");
  add_spec_options(form, args);
  add_window_option(form, args, "filtration degree of the basis (default 1)");
  add_engine_options(form, args);
  add_output_options(form, args);
  form->callback([&] {
    const int d = args.dmax < 0 ? 1 : args.dmax;
    exit_code = run_session_command(
        args, "form", true, [&](orbitq_session* s, char** out) {
          return orbitq_form(s, d, out);
        });
  });

  // casimir
  auto* cas = app.add_subcommand("casimir", "central element image");
  add_spec_options(cas, args);
  add_engine_options(cas, args);
  add_output_options(cas, args);
  cas->callback([&] {
    exit_code =
        run_session_command(args, "casimir", true, orbitq_casimir);
  });

  // batch
  auto* batch = app.add_subcommand("batch", "run many jobs from a file");
  std::string batch_path;
  batch->add_option("file", batch_path, "job file, one spec per line")
      ->required();
  batch->add_option("--workers", args.workers, "worker pool size");
  add_output_options(batch, args);
  batch->callback([&] {
    char* report = nullptr;
    std::string config = args.config_path;
    if (args.workers >= 0) {
      // Worker count travels through a transient config file so the batch
      // entry point stays a single call.
      config = "/tmp/orbitq-batch-" + std::to_string(::getpid()) + ".cfg";
      std::ofstream out(config);
      if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        out << in.rdbuf();
      }
      out << "\nworkers = " << args.workers << "\n";
    }
    if (orbitq_batch(batch_path.c_str(),
                     config.empty() ? nullptr : config.c_str(),
                     args.cache_dir.empty() ? nullptr
                                            : args.cache_dir.c_str(),
                     args.stable ? 1 : 0, &report) != ORBITQ_OK) {
      exit_code = report_error("batch");
      return;
    }
    exit_code = emit(args, report, true);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }
  return exit_code;
}
