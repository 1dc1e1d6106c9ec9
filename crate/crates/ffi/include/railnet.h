#ifndef RAILNET_H
#define RAILNET_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Bridge value written for edges whose deletion disconnects their endpoints.
#define RAILNET_BRIDGE_DISCONNECTED -1

// Result code of every fallible call.
typedef enum RailnetStatus {
  RAILNET_STATUS_OK = 0,
  RAILNET_STATUS_NULL_POINTER = 1,
  RAILNET_STATUS_INVALID_ARGUMENT = 2,
  // A caller buffer length does not match the node or edge count.
  RAILNET_STATUS_BUFFER_SIZE = 3,
  RAILNET_STATUS_IO = 4,
  RAILNET_STATUS_PARSE = 5,
  RAILNET_STATUS_INGESTION = 6,
  RAILNET_STATUS_DOMAIN = 7,
  RAILNET_STATUS_CONFIG = 8,
  RAILNET_STATUS_INTERNAL = 9,
  RAILNET_STATUS_PANIC = 10,
} RailnetStatus;

// Opaque network handle.
typedef struct RailnetNetwork RailnetNetwork;

// Descriptive statistics; `assortativity` is NaN when undefined.
typedef struct RailnetMetrics {
  size_t n_nodes;
  size_t n_edges;
  double in_deg_median;
  double out_deg_median;
  double avg_shortest_path;
  double reachable_pair_fraction;
  double clustering;
  double assortativity;
  // 0 when every node was a BFS source.
  size_t sampled_sources;
} RailnetMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next call into the library on the same thread.
const char *railnet_last_error(void);

// Library version as a static NUL-terminated string.
const char *railnet_version(void);

// Loads station and route files and builds the full network.
//
// # Safety
// Paths must be NUL-terminated strings; `out` must be writable.
enum RailnetStatus railnet_network_load(const char *stations_path,
                                        const char *routes_path,
                                        double proximity_m,
                                        struct RailnetNetwork **out);

// Builds a network on nodes `0..n` from parallel source/target arrays.
//
// # Safety
// `sources` and `targets` must each hold `m` elements (may be NULL when `m == 0`).
enum RailnetStatus railnet_network_from_edges(size_t n,
                                              const uint32_t *sources,
                                              const uint32_t *targets,
                                              size_t m,
                                              struct RailnetNetwork **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `g` must come from this library and not be used afterwards.
void railnet_network_free(struct RailnetNetwork *g);

// New handle for the network without rail stations.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum RailnetStatus railnet_network_without_rail(const struct RailnetNetwork *g,
                                                struct RailnetNetwork **out);

// New handle for the rail-only subnetwork.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum RailnetStatus railnet_network_rail_only(const struct RailnetNetwork *g,
                                             struct RailnetNetwork **out);

// # Safety
// `g` must be a live handle; `nodes` and `edges` must be writable.
enum RailnetStatus railnet_network_size(const struct RailnetNetwork *g,
                                        size_t *nodes,
                                        size_t *edges);

// Station id of node `v` as a new string; free it with [`railnet_string_free`].
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum RailnetStatus railnet_station_id(const struct RailnetNetwork *g, uint32_t v, char **out);

// # Safety
// `s` must come from this library or be NULL.
void railnet_string_free(char *s);

// Descriptive statistics. `sample_sources == 0` sweeps every node as a BFS source.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum RailnetStatus railnet_metrics(const struct RailnetNetwork *g,
                                   size_t sample_sources,
                                   uint64_t seed,
                                   struct RailnetMetrics *out);

// Betweenness of every node into `out[0..len]`, `len` = node count.
//
// # Safety
// `g` must be a live handle; `out` must hold `len` doubles.
enum RailnetStatus railnet_betweenness(const struct RailnetNetwork *g, double *out, size_t len);

// Closeness of every node; `incoming` selects distances towards the node rather than from it.
//
// # Safety
// `g` must be a live handle; `out` must hold `len` doubles.
enum RailnetStatus railnet_closeness(const struct RailnetNetwork *g,
                                     bool incoming,
                                     double *out,
                                     size_t len);

// Edge endpoints in canonical edge order, the order used by [`railnet_bridge_values`].
//
// # Safety
// `g` must be a live handle; both buffers must hold `len` elements.
enum RailnetStatus railnet_edges(const struct RailnetNetwork *g,
                                 uint32_t *sources,
                                 uint32_t *targets,
                                 size_t len);

// Local bridge value of every edge; [`RAILNET_BRIDGE_DISCONNECTED`] marks edges
// whose removal disconnects their endpoints.
//
// # Safety
// `g` must be a live handle; `out` must hold `len` elements.
enum RailnetStatus railnet_bridge_values(const struct RailnetNetwork *g, int64_t *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAILNET_H */
