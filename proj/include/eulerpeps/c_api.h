#ifndef EULERPEPS_C_API_H
#define EULERPEPS_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EP_API __declspec(dllexport)
#else
#define EP_API __attribute__((visibility("default")))
#endif

/* Status codes; values match the core library error codes. */
typedef enum ep_status {
  EP_OK = 0,
  EP_INVALID_ARGUMENT = 1,
  EP_DEGENERATE_SIZE = 2,
  EP_INVALID_HEXAGON = 3,
  EP_NORMALIZATION = 4,
  EP_SINGULAR_BOUND = 5,
  EP_SIZE_LIMIT = 6,
  EP_DEGENERACY = 7,
  EP_ZERO_STATE = 8,
  EP_SYMMETRY = 9,
  EP_LAYOUT = 10,
  EP_CONFIG = 11,
  EP_IO = 12,
  EP_INTERNAL = 13
} ep_status;

typedef enum ep_boundary { EP_TORUS = 0, EP_CYLINDER_OPEN_A1 = 1 } ep_boundary;
typedef enum ep_orientation { EP_K2XK1 = 0, EP_K1XK2 = 1 } ep_orientation;

typedef struct ep_lattice ep_lattice;
typedef struct ep_state ep_state;

/* Message of the last failing call on this thread; empty after success. */
EP_API const char* ep_last_error(void);
EP_API const char* ep_status_name(ep_status s);
/* Frees strings returned through char** out-parameters. */
EP_API void ep_string_free(char* s);

EP_API ep_status ep_lattice_create(int L1, int L2, ep_boundary boundary, ep_lattice** out);
EP_API void ep_lattice_destroy(ep_lattice* lat);
EP_API ep_status ep_lattice_num_sites(const ep_lattice* lat, int* out);
EP_API ep_status ep_lattice_num_hexagons(const ep_lattice* lat, int* out);
EP_API ep_status ep_lattice_to_json(const ep_lattice* lat, char** out);

/* Ascending band energies at (k1, k2). */
EP_API ep_status ep_bloch_bands(double k1, double k2, double mu, double energies[3]);
EP_API ep_status ep_euler_curvature(double k1, double k2, ep_orientation o, double* out);
EP_API ep_status ep_euler_class(int grid, ep_orientation o, double* out);
/* g11, g12, g22 of the flat-band pair. */
EP_API ep_status ep_quantum_metric(double k1, double k2, double g[3]);

/* Product of hexagon annihilators on the filled lattice (default beta). */
EP_API ep_status ep_state_ground(const ep_lattice* lat, ep_state** out);
/* Operator-formalism PEPS evaluation. */
EP_API ep_status ep_state_peps(const ep_lattice* lat, ep_state** out);
EP_API ep_status ep_state_apply_circuit(const ep_lattice* lat, const ep_state* in, double alpha, ep_state** out);
EP_API void ep_state_destroy(ep_state* s);
EP_API ep_status ep_state_num_terms(const ep_state* s, size_t* out);
EP_API ep_status ep_state_particle_number(const ep_state* s, int* out);
EP_API ep_status ep_state_fidelity(const ep_state* a, const ep_state* b, double* out);
EP_API ep_status ep_state_serialize(const ep_state* s, char** out);
EP_API ep_status ep_state_parse(const char* text, ep_state** out);

/* JSON schema of the run configuration. */
EP_API ep_status ep_config_schema(char** out);
/* Runs one command. config_json may be NULL; out_dir, when non-NULL,
   overrides output.directory. *report receives the summary JSON and
   *verdict 1 when every check passed, 0 otherwise. */
EP_API ep_status ep_run(const char* command, const char* config_json, const char* out_dir, char** report,
                        int* verdict);

#ifdef __cplusplus
}
#endif

#endif
