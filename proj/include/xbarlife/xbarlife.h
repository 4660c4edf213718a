/*
 * Copyright 2026 The xbarlife Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libxbarlife: crossbar DC solves, OxRRAM read endurance,
 * cost-per-bit, workloads and endurance-aware placement.
 *
 * Every fallible call returns an xbl_status; on failure a message is
 * available from xbl_last_error() on the calling thread until the next call
 * on that thread. Objects are opaque and released with their *_free call
 * (NULL is accepted). Matrices are N*N arrays in row-major order, row 0 being
 * the top wordline.
 */

#ifndef XBARLIFE_XBARLIFE_H_
#define XBARLIFE_XBARLIFE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(XBARLIFE_BUILDING)
#define XBL_API __attribute__((visibility("default")))
#else
#define XBL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum xbl_status {
  XBL_OK = 0,
  XBL_ERR_INTERNAL = 1,
  XBL_ERR_INVALID = 2, /* usage, validation, domain or capacity error */
  XBL_ERR_SOLVER = 3,  /* non-convergence */
  XBL_ERR_IO = 4
} xbl_status;

typedef enum xbl_state {
  XBL_HRS = 0,
  XBL_LRS1 = 1,
  XBL_LRS2 = 2,
  XBL_LRS3 = 3
} xbl_state;

typedef enum xbl_read_mode {
  XBL_READ_ISOLATED = 0, /* all rows driven, only the measured cell on */
  XBL_READ_FULL = 1      /* all rows driven, all cells on */
} xbl_read_mode;

/* Endurance / lifetime "never disturbed". */
#define XBL_UNLIMITED UINT64_MAX

typedef struct xbl_config xbl_config;
typedef struct xbl_network xbl_network;
typedef struct xbl_solution xbl_solution;
typedef struct xbl_workload xbl_workload;

typedef struct xbl_geometry {
  size_t n;
  double r_wordline_segment; /* ohm */
  double r_bitline_segment;  /* ohm */
  double r_driver;           /* ohm */
} xbl_geometry;

typedef struct xbl_cell_levels {
  double r_hrs;
  double r_lrs1;
  double r_lrs2;
  double r_lrs3;
  double r_access;
} xbl_cell_levels;

typedef struct xbl_technology {
  double v0;              /* m/s */
  double e_a;             /* eV */
  double temperature;     /* K */
  double k_boltzmann;     /* eV/K */
  double a0;              /* m */
  double oxide_thickness; /* m */
  double q_charge;
  double gamma0;
  double beta;
  double g0;              /* m */
  double g_min;           /* m */
  double feature_size;    /* nm */
  double horizon;         /* s */
} xbl_technology;

XBL_API const char* xbl_version(void);
XBL_API const char* xbl_last_error(void);

/* ---- configuration ---- */
XBL_API xbl_status xbl_config_default(xbl_config** out);
XBL_API xbl_status xbl_config_load(const char* path, xbl_config** out);
XBL_API xbl_status xbl_config_parse(const char* text, xbl_config** out);
XBL_API void xbl_config_free(xbl_config* config);
XBL_API xbl_status xbl_config_geometry(const xbl_config* config, size_t n,
                                       int node_nm, xbl_geometry* out);
XBL_API xbl_status xbl_config_cell_levels(const xbl_config* config,
                                          xbl_cell_levels* out);
XBL_API xbl_status xbl_config_technology(const xbl_config* config,
                                         int node_nm, xbl_technology* out);

/* ---- circuit ---- */
/* states: n*n xbl_state values, or NULL for all `fill`. */
XBL_API xbl_status xbl_network_build(const xbl_geometry* geometry,
                                     const xbl_cell_levels* levels,
                                     const uint8_t* states, xbl_state fill,
                                     xbl_network** out);
XBL_API xbl_status xbl_network_from_config(const xbl_config* config, size_t n,
                                           int node_nm, xbl_state state,
                                           xbl_network** out);
XBL_API size_t xbl_network_size(const xbl_network* network);
XBL_API size_t xbl_network_unknowns(const xbl_network* network);
XBL_API void xbl_network_free(xbl_network* network);

/* driven: n flags or NULL for all rows; access: n*n flags or NULL for all
 * cells on; tolerance <= 0 selects 1e-9. */
XBL_API xbl_status xbl_solve_dc(const xbl_network* network, double v_spike,
                                const uint8_t* driven, const uint8_t* access,
                                double tolerance, xbl_solution** out);
XBL_API void xbl_solution_free(xbl_solution* solution);
XBL_API size_t xbl_solution_size(const xbl_solution* solution);
XBL_API double xbl_solution_residual(const xbl_solution* solution);
XBL_API xbl_status xbl_solution_cell_currents(const xbl_solution* solution,
                                              double* out, size_t len);
XBL_API xbl_status xbl_solution_cell_voltages(const xbl_solution* solution,
                                              double* out, size_t len);
XBL_API xbl_status xbl_solution_bitline_currents(const xbl_solution* solution,
                                                 double* out, size_t len);
XBL_API xbl_status xbl_solution_driver_currents(const xbl_solution* solution,
                                                double* out, size_t len);
/* 2*n*n values, wordline nodes first. */
XBL_API xbl_status xbl_solution_node_voltages(const xbl_solution* solution,
                                              double* out, size_t len);

XBL_API xbl_status xbl_calibrate_spike_voltage(const xbl_network* network,
                                               double target_current,
                                               size_t row, size_t col,
                                               xbl_read_mode mode,
                                               double* v_spike);
XBL_API xbl_status xbl_current_disparity(const xbl_network* network,
                                         xbl_read_mode mode, double* percent,
                                         double* i_shortest,
                                         double* i_longest);

/* ---- endurance ---- */
XBL_API xbl_status xbl_gap_rate(const xbl_technology* tech, double gap,
                                double voltage, double* rate);
/* INFINITY when the gap does not reach g_min within the horizon. */
XBL_API xbl_status xbl_time_to_disturb_hrs(const xbl_technology* tech,
                                           double voltage, double* seconds);
XBL_API xbl_status xbl_time_to_disturb_lrs(double voltage, double* seconds);
XBL_API xbl_status xbl_endurance_cycles(double t_disturb, double pulse_width,
                                        uint64_t* cycles);
XBL_API uint64_t xbl_inference_lifetime(uint64_t endurance,
                                        uint64_t spikes_per_image);
/* Uses the network's cell states to dispatch HRS/LRS laws. */
XBL_API xbl_status xbl_endurance_map(const xbl_network* network,
                                     const xbl_solution* solution,
                                     const xbl_technology* tech,
                                     double pulse_width, uint64_t* cycles,
                                     size_t len);

/* ---- cost ---- */
/* Default element areas when unit_areas == 0, all-1 F^2 otherwise. */
XBL_API xbl_status xbl_cost_per_bit(size_t n, double feature_size,
                                    int unit_areas, double* exact,
                                    double* approx);

/* ---- workloads and placement ---- */
XBL_API xbl_status xbl_average_isi(const double* times, size_t count,
                                   double* isi);
XBL_API xbl_status xbl_workload_load(const char* path, xbl_workload** out);
XBL_API xbl_status xbl_workload_parse(const char* json, xbl_workload** out);
XBL_API xbl_status xbl_workload_generate(size_t n_synapses,
                                         const char* distribution,
                                         uint64_t seed, xbl_workload** out);
XBL_API size_t xbl_workload_size(const xbl_workload* workload);
/* Writes up to cap bytes (NUL-terminated); *needed receives the full size
 * including the terminator. */
XBL_API xbl_status xbl_workload_to_json(const xbl_workload* workload,
                                        char* buf, size_t cap,
                                        size_t* needed);
XBL_API void xbl_workload_free(xbl_workload* workload);

typedef struct xbl_lifetime {
  uint64_t lifetime_images;
  uint64_t baseline_lifetime_images;
  double improvement_vs_baseline;
  size_t limiting_row; /* SIZE_MAX when nothing limits */
  size_t limiting_col;
  uint64_t limiting_synapse;
} xbl_lifetime;

/* strategy: 0 baseline row-major, 1 random(seed), 2 endurance-aware.
 * rows/cols (optional) receive each synapse's cell in workload order. */
XBL_API xbl_status xbl_place(const xbl_workload* workload,
                             const uint64_t* endurance, size_t n,
                             int strategy, uint64_t seed, size_t* rows,
                             size_t* cols, xbl_lifetime* report);

/* ---- batch commands ---- */
typedef struct xbl_run_options {
  const char* config_path; /* recorded in the manifest */
  const char* out_dir;
  size_t size;        /* 0: config default */
  int node;           /* 0: config default */
  int state;          /* -1: command default, else xbl_state */
  double pulse_width; /* <= 0: config default */
  double v_spike;     /* <= 0: command default */
  int mode;           /* -1: config default, else xbl_read_mode */
  uint64_t seed;
  unsigned jobs;
  const size_t* sizes;
  size_t sizes_count;
  const int* nodes;
  size_t nodes_count;
  const char* workload_path;
  const char* generator;
  size_t synapses; /* 0: n*n */
  int local_search;
} xbl_run_options;

XBL_API void xbl_run_options_init(xbl_run_options* options);

/* command: "current-map", "endurance-map", "disparity-sweep", "cost-sweep",
 * "optimize" or "calibrate". summary (optional) receives a one-line result. */
XBL_API xbl_status xbl_run(const char* command, const xbl_config* config,
                           const xbl_run_options* options, char* summary,
                           size_t summary_cap);

#ifdef __cplusplus
}
#endif

#endif /* XBARLIFE_XBARLIFE_H_ */
