#ifndef ARITHDYN_ARITHDYN_H
#define ARITHDYN_ARITHDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AD_API __declspec(dllexport)
#else
#define AD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ad_status {
    AD_OK = 0,
    AD_ASSERTION_FAILED = 2, /* ran to completion, some check in the summary failed */
    AD_RESOURCE_EXCEEDED = 3,
    AD_CONFIG_ERROR = 4,     /* bad config, bad input file, validation failure */
    AD_INVALID_ARGUMENT = 5, /* null pointer or out-of-range index */
    AD_IO_ERROR = 6,
    AD_INTERNAL_ERROR = 7
} ad_status;

typedef struct ad_map ad_map;

/* Message and JSON diagnostic for the last failing call on this thread.
 * The diagnostic is an object {"status", "error", "message", ...}; both
 * strings stay valid until the next call on the same thread. */
AD_API const char *ad_last_error(void);
AD_API const char *ad_last_diagnostic(void);

AD_API const char *ad_version(void);

/* Map from the JSON wire format {"dimension": N, "components": [...]}. */
AD_API ad_status ad_map_from_json(const char *json_text, ad_map **out);
/* Map from N component strings such as "x1^3 + x2". */
AD_API ad_status ad_map_from_components(size_t dimension, const char *const *components, ad_map **out);
AD_API void ad_map_free(ad_map *map);

AD_API size_t ad_map_dimension(const ad_map *map);
/* Row-major N x N degree matrix, entry (i, j) = deg_{x_i} f_j. */
AD_API ad_status ad_map_degree_matrix(const ad_map *map, uint64_t *out, size_t out_len);
AD_API ad_status ad_map_dynamical_degree(const ad_map *map, uint64_t *out);
/* Writes the text of component i (1-based) including the terminating NUL.
 * With buf == NULL or too small a buffer, *needed receives the size. */
AD_API ad_status ad_map_component_text(const ad_map *map, size_t i, char *buf, size_t buf_len, size_t *needed);
AD_API ad_status ad_map_to_json(const ad_map *map, char *buf, size_t buf_len, size_t *needed);

/* Runs the experiment described by a config file. out_dir may be NULL to
 * keep the configured output; seed_override applies when has_seed != 0.
 * Returns AD_OK when every check passes, AD_ASSERTION_FAILED otherwise. */
AD_API ad_status ad_run_experiment(const char *config_path, const char *out_dir, int has_seed, uint64_t seed);

/* Density report for a points CSV at degree bound d. */
AD_API ad_status ad_density(const char *points_csv_path, unsigned degree, const char *out_dir);

/* Degree report for a map JSON file, sequence up to n_max. */
AD_API ad_status ad_degrees(const char *map_json_path, size_t n_max, const char *out_dir);

/* Pretty JSON summary written by the last successful or assertion-failing
 * run on this thread. */
AD_API const char *ad_last_summary(void);

#ifdef __cplusplus
}
#endif

#endif /* ARITHDYN_ARITHDYN_H */
