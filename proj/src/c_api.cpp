#include "eulerpeps/c_api.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "eulerpeps/bloch.hpp"
#include "eulerpeps/circuit.hpp"
#include "eulerpeps/error.hpp"
#include "eulerpeps/fock.hpp"
#include "eulerpeps/geometry.hpp"
#include "eulerpeps/lattice.hpp"
#include "eulerpeps/peps.hpp"
#include "eulerpeps/pipeline.hpp"

struct ep_lattice {
  eulerpeps::Lattice lat;
};

struct ep_state {
  eulerpeps::SparseState state;
};

namespace {

thread_local std::string last_error;

template <class F>
ep_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return EP_OK;
  } catch (const eulerpeps::Error& e) {
    last_error = e.what();
    return static_cast<ep_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return EP_SIZE_LIMIT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EP_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (!p) eulerpeps::fail(eulerpeps::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

eulerpeps::Orientation orient(ep_orientation o) {
  return o == EP_K1XK2 ? eulerpeps::Orientation::K1xK2 : eulerpeps::Orientation::K2xK1;
}

}  // namespace

extern "C" {

const char* ep_last_error(void) { return last_error.c_str(); }

const char* ep_status_name(ep_status s) { return eulerpeps::error_code_name(static_cast<eulerpeps::ErrorCode>(s)); }

void ep_string_free(char* s) { std::free(s); }

ep_status ep_lattice_create(int L1, int L2, ep_boundary boundary, ep_lattice** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (boundary != EP_TORUS && boundary != EP_CYLINDER_OPEN_A1)
      eulerpeps::fail(eulerpeps::ErrorCode::InvalidArgument, "unknown boundary");
    const auto b = boundary == EP_TORUS ? eulerpeps::Boundary::Torus : eulerpeps::Boundary::CylinderOpenA1;
    *out = new ep_lattice{eulerpeps::build_lattice(L1, L2, b)};
  });
}

void ep_lattice_destroy(ep_lattice* lat) { delete lat; }

ep_status ep_lattice_num_sites(const ep_lattice* lat, int* out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = lat->lat.num_sites();
  });
}

ep_status ep_lattice_num_hexagons(const ep_lattice* lat, int* out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = lat->lat.num_hexagons();
  });
}

ep_status ep_lattice_to_json(const ep_lattice* lat, char** out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = dup(eulerpeps::lattice_to_json(lat->lat).dump());
  });
}

ep_status ep_bloch_bands(double k1, double k2, double mu, double energies[3]) {
  return guarded([&] {
    need(energies, "energies");
    const Eigen::Vector3d e = eulerpeps::band_solution({k1, k2}, mu).energies;
    for (int i = 0; i < 3; ++i) energies[i] = e(i);
  });
}

ep_status ep_euler_curvature(double k1, double k2, ep_orientation o, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eulerpeps::euler_curvature({k1, k2}, eulerpeps::GeoMethod::AnalyticN, eulerpeps::kDefaultFdStep, orient(o));
  });
}

ep_status ep_euler_class(int grid, ep_orientation o, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eulerpeps::euler_class(grid, orient(o));
  });
}

ep_status ep_quantum_metric(double k1, double k2, double g[3]) {
  return guarded([&] {
    need(g, "g");
    const auto m = eulerpeps::quantum_metric({k1, k2});
    g[0] = m.g11, g[1] = m.g12, g[2] = m.g22;
  });
}

ep_status ep_state_ground(const ep_lattice* lat, ep_state** out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = nullptr;
    *out = new ep_state{eulerpeps::build_ground_state(lat->lat)};
  });
}

ep_status ep_state_peps(const ep_lattice* lat, ep_state** out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = nullptr;
    *out = new ep_state{eulerpeps::evaluate_peps_state(lat->lat)};
  });
}

ep_status ep_state_apply_circuit(const ep_lattice* lat, const ep_state* in, double alpha, ep_state** out) {
  return guarded([&] {
    need(lat, "lattice");
    need(in, "state");
    need(out, "out");
    *out = nullptr;
    if (in->state.num_modes() != lat->lat.num_sites())
      eulerpeps::fail(eulerpeps::ErrorCode::InvalidArgument, "state and lattice sizes differ");
    *out = new ep_state{eulerpeps::apply_circuit(in->state, lat->lat, alpha)};
  });
}

void ep_state_destroy(ep_state* s) { delete s; }

ep_status ep_state_num_terms(const ep_state* s, size_t* out) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    *out = s->state.size();
  });
}

ep_status ep_state_particle_number(const ep_state* s, int* out) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    *out = s->state.particle_number();
  });
}

ep_status ep_state_fidelity(const ep_state* a, const ep_state* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = eulerpeps::fidelity(a->state, b->state);
  });
}

ep_status ep_state_serialize(const ep_state* s, char** out) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    *out = dup(eulerpeps::serialize_state(s->state));
  });
}

ep_status ep_state_parse(const char* text, ep_state** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = nullptr;
    *out = new ep_state{eulerpeps::parse_state(text)};
  });
}

ep_status ep_config_schema(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(eulerpeps::config_schema().dump(2));
  });
}

ep_status ep_run(const char* command, const char* config_json, const char* out_dir, char** report, int* verdict) {
  return guarded([&] {
    need(command, "command");
    need(report, "report");
    need(verdict, "verdict");
    *report = nullptr;
    *verdict = 0;
    nlohmann::json j = nlohmann::json::object();
    if (config_json && *config_json) {
      try {
        j = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        eulerpeps::fail(eulerpeps::ErrorCode::Config, std::string("malformed config JSON: ") + e.what());
      }
    }
    eulerpeps::RunConfig cfg = eulerpeps::parse_config(j);
    const std::string cmd(command);
    if (!cfg.command.empty() && cfg.command != cmd)
      eulerpeps::fail(eulerpeps::ErrorCode::Config, "config.command '" + cfg.command + "' does not match '" + cmd + "'");
    cfg.command = cmd;
    if (std::find(eulerpeps::command_names().begin(), eulerpeps::command_names().end(), cmd) ==
        eulerpeps::command_names().end())
      eulerpeps::fail(eulerpeps::ErrorCode::Config, "unknown command '" + cmd + "'");
    if (out_dir && *out_dir) cfg.directory = out_dir;
    const eulerpeps::RunReport rep = eulerpeps::run_command(cfg);
    *report = dup(rep.to_json(cfg).dump(2));
    *verdict = rep.pass() ? 1 : 0;
  });
}

}  // extern "C"
