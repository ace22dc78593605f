#include "orbitq.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "orbitq/cli_reports.hpp"

namespace {

using namespace orbitq;
namespace cr = orbitq::cli_reports;

thread_local std::string g_error_message;
thread_local int g_error_code = ORBITQ_OK;

int status_of(ErrorCode code) {
  // ErrorCode enumerators map one past their declaration order so that 0
  // stays reserved for success.
  return static_cast<int>(code) + 1;
}

void clear_error() {
  g_error_message.clear();
  g_error_code = ORBITQ_OK;
}

int set_error(int code, const std::string& message) {
  g_error_code = code;
  g_error_message = message;
  return code;
}

// Runs fn under the C-boundary exception firewall.
template <typename Fn>
int guarded(Fn&& fn) {
  clear_error();
  try {
    fn();
    return ORBITQ_OK;
  } catch (const Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return set_error(ORBITQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(ORBITQ_ERR_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

int deliver(const std::string& text, char** out) {
  *out = dup_string(text);
  if (*out == nullptr) {
    throw Error(ErrorCode::Internal, "out of memory");
  }
  return ORBITQ_OK;
}

}  // namespace

struct orbitq_session {
  orbit_catalog::OrbitSpec spec;
  cr::ReportOptions opt;
  std::unique_ptr<cr::Session> engines;

  cr::Session& session() {
    if (!engines) engines = std::make_unique<cr::Session>(spec);
    return *engines;
  }
  cr::Cache cache() { return cr::Cache(opt.cfg.cache_dir); }
};

namespace {

// Shared shape of the session-bound report getters.
template <typename Fn>
int session_report(orbitq_session* session, char** out, Fn&& build) {
  if (session == nullptr || out == nullptr) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] { deliver(build(), out); });
}

}  // namespace

extern "C" {

const char* orbitq_version(void) { return cr::kToolVersion; }

const char* orbitq_error_name(int code) {
  if (code == ORBITQ_OK) return "ok";
  if (code == ORBITQ_ERR_BAD_ARGUMENT) return "bad_argument";
  const int raw = code - 1;
  if (raw >= static_cast<int>(ErrorCode::NotHermitian) &&
      raw <= static_cast<int>(ErrorCode::Internal)) {
    return error_code_name(static_cast<ErrorCode>(raw));
  }
  return "unknown";
}

const char* orbitq_last_error_message(void) { return g_error_message.c_str(); }

int orbitq_last_error_code(void) { return g_error_code; }

orbitq_session* orbitq_session_new(const char* group, int n,
                                   const int* partition, int partition_len) {
  clear_error();
  if (group == nullptr || partition == nullptr || partition_len <= 0 ||
      n <= 0) {
    set_error(ORBITQ_ERR_BAD_ARGUMENT,
              "group, partition, and positive sizes are required");
    return nullptr;
  }
  orbitq_session* handle = nullptr;
  const int rc = guarded([&] {
    orbit_catalog::GroupKind g;
    const std::string tok(group);
    if (tok == "gl" || tok == "GL") {
      g = orbit_catalog::GroupKind::GL;
    } else if (tok == "o" || tok == "O") {
      g = orbit_catalog::GroupKind::O;
    } else if (tok == "sp" || tok == "Sp" || tok == "SP") {
      g = orbit_catalog::GroupKind::Sp;
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown group '" + tok + "'");
    }
    std::vector<int> parts(partition, partition + partition_len);
    auto spec =
        orbit_catalog::validate(g, static_cast<std::size_t>(n), parts);
    handle = new orbitq_session{spec, {}, nullptr};
  });
  return rc == ORBITQ_OK ? handle : nullptr;
}

void orbitq_session_free(orbitq_session* session) { delete session; }

int orbitq_set_option(orbitq_session* session, const char* key,
                      const char* value) {
  if (session == nullptr || key == nullptr || value == nullptr) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] { session->opt.cfg.set(key, value); });
}

int orbitq_load_config(orbitq_session* session, const char* path) {
  if (session == nullptr || path == nullptr) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] { session->opt.cfg.merge_file(path); });
}

void orbitq_set_stable(orbitq_session* session, int stable) {
  if (session != nullptr) session->opt.stable = stable != 0;
}

int orbitq_orbits_list(const char* group, int n, int stable, char** out) {
  if (group == nullptr || out == nullptr || n <= 0) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] {
    orbit_catalog::GroupKind g;
    const std::string tok(group);
    if (tok == "gl" || tok == "GL") {
      g = orbit_catalog::GroupKind::GL;
    } else if (tok == "o" || tok == "O") {
      g = orbit_catalog::GroupKind::O;
    } else if (tok == "sp" || tok == "Sp" || tok == "SP") {
      g = orbit_catalog::GroupKind::Sp;
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown group '" + tok + "'");
    }
    cr::ReportOptions opt;
    opt.stable = stable != 0;
    deliver(cr::orbits_list_json(g, static_cast<std::size_t>(n), opt), out);
  });
}

int orbitq_orbits_info(orbitq_session* session, char** out) {
  return session_report(session, out, [&] {
    return cr::orbits_info_json(session->spec, session->opt);
  });
}

int orbitq_model(orbitq_session* session, char** out) {
  return session_report(session, out, [&] {
    return cr::model_json(session->session(), session->opt);
  });
}

int orbitq_hilbert(orbitq_session* session, int jmax, char** out) {
  return session_report(session, out, [&] {
    auto cache = session->cache();
    return cr::hilbert_json(session->session(), jmax, cache, session->opt);
  });
}

int orbitq_koszul(orbitq_session* session, int nmax, char** out) {
  return session_report(session, out, [&] {
    auto cache = session->cache();
    return cr::koszul_json(session->session(), nmax, cache, session->opt);
  });
}

int orbitq_oracle(orbitq_session* session, int pmax, char** out) {
  return session_report(session, out, [&] {
    auto cache = session->cache();
    return cr::oracle_json(session->spec, pmax, cache, session->opt);
  });
}

int orbitq_verify_kp(orbitq_session* session, int pmax, char** out) {
  return session_report(session, out, [&] {
    auto cache = session->cache();
    return cr::verify_kp_json(session->session(), pmax, cache, session->opt);
  });
}

int orbitq_verify_dixmier(orbitq_session* session, int dmax, char** out) {
  return session_report(session, out, [&] {
    auto cache = session->cache();
    return cr::verify_dixmier_json(session->session(), dmax, cache,
                                   session->opt);
  });
}

int orbitq_form(orbitq_session* session, int d, char** out) {
  return session_report(session, out, [&] {
    return cr::form_json(session->session(), d, session->opt);
  });
}

int orbitq_casimir(orbitq_session* session, char** out) {
  return session_report(session, out, [&] {
    return cr::casimir_json(session->session(), session->opt);
  });
}

int orbitq_batch(const char* batch_path, const char* config_path,
                 const char* cache_dir, int stable, char** out) {
  if (batch_path == nullptr || out == nullptr) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] {
    cr::ReportOptions opt;
    opt.stable = stable != 0;
    if (config_path != nullptr && *config_path != '\0') {
      opt.cfg.merge_file(config_path);
    }
    if (cache_dir != nullptr && *cache_dir != '\0') {
      opt.cfg.cache_dir = cache_dir;
    }
    cr::Cache cache(opt.cfg.cache_dir);
    deliver(cr::batch_json(batch_path, cache, opt), out);
  });
}

int orbitq_report_csv(const char* report_json, char** out) {
  if (report_json == nullptr || out == nullptr) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] { deliver(cr::to_csv(report_json), out); });
}

int orbitq_report_human(const char* report_json, char** out) {
  if (report_json == nullptr || out == nullptr) {
    return set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  return guarded([&] { deliver(cr::render_human(report_json), out); });
}

int orbitq_report_passed(const char* report_json) {
  if (report_json == nullptr) {
    return -set_error(ORBITQ_ERR_BAD_ARGUMENT, "null argument");
  }
  bool passed = false;
  const int rc = guarded([&] { passed = cr::report_passed(report_json); });
  if (rc != ORBITQ_OK) return -rc;
  return passed ? 1 : 0;
}

void orbitq_string_free(char* text) { std::free(text); }

}  // extern "C"
