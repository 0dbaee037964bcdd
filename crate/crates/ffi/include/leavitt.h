#ifndef LEAVITT_H
#define LEAVITT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LvStatus {
  LV_STATUS_OK = 0,
  LV_STATUS_NULL_ARGUMENT = 1,
  LV_STATUS_INVALID_UTF8 = 2,
  LV_STATUS_INVALID_GRAPH = 3,
  LV_STATUS_UNKNOWN_NAME = 4,
  LV_STATUS_PRECONDITION = 5,
  LV_STATUS_PARSE = 6,
  LV_STATUS_DEGENERATE = 7,
  LV_STATUS_NOT_INVERTIBLE = 8,
  LV_STATUS_JSON = 9,
  LV_STATUS_IO = 10,
  LV_STATUS_INTERNAL = 11,
  LV_STATUS_PANIC = 12,
} LvStatus;

// The Leavitt path algebra of a graph.
typedef struct LvAlgebra LvAlgebra;

// An element in normal form. Only meaningful with the algebra it came from.
typedef struct LvElement LvElement;

// A finite directed graph.
typedef struct LvGraph LvGraph;

// A representation on a finite measure space.
typedef struct LvRep LvRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failed call on this thread, or null. The caller
// owns the returned string.
char *lv_last_error(void);

// # Safety
// `s` is null or was returned by this library and not yet freed.
void lv_string_free(char *s);

// Parses a graph from JSON `{"vertices": [...], "edges": [{"name", "src", "dst"}]}`.
//
// # Safety
// `json` is a nul-terminated string; `out` is writable.
enum LvStatus lv_graph_from_json(const char *json, struct LvGraph **out);

// One of the built-in graphs `E1 A2 A3 R1 R2 T2`.
//
// # Safety
// `name` is a nul-terminated string; `out` is writable.
enum LvStatus lv_graph_sample(const char *name, struct LvGraph **out);

// # Safety
// `g` is null or a live graph handle.
void lv_graph_free(struct LvGraph *g);

// # Safety
// `g` is a live graph handle.
size_t lv_graph_vertex_count(const struct LvGraph *g);

// # Safety
// `g` is a live graph handle.
size_t lv_graph_edge_count(const struct LvGraph *g);

// Whether the Leavitt path algebra is simple, and whether it is purely
// infinite simple. Either out-pointer may be null.
//
// # Safety
// `g` is a live graph handle; non-null out-pointers are writable.
enum LvStatus lv_graph_simplicity(const struct LvGraph *g, bool *simple, bool *purely_infinite);

// Graphviz source for the graph.
//
// # Safety
// `g` is a live graph handle; `out` is writable.
enum LvStatus lv_graph_to_dot(const struct LvGraph *g, char **out);

// The Leavitt path algebra of `g`, or its Cohn algebra when `cohn` is set.
// The algebra keeps its own copy of the graph.
//
// # Safety
// `g` is a live graph handle; `out` is writable.
enum LvStatus lv_algebra_new(const struct LvGraph *g, bool cohn, struct LvAlgebra **out);

// # Safety
// `a` is null or a live algebra handle.
void lv_algebra_free(struct LvAlgebra *a);

// Parses an element such as `"2*e.f* - v"` and reduces it to normal form.
//
// # Safety
// `a` is a live algebra handle; `text` is a nul-terminated string; `out` is writable.
enum LvStatus lv_element_parse(const struct LvAlgebra *a, const char *text, struct LvElement **out);

// # Safety
// `x` is null or a live element handle.
void lv_element_free(struct LvElement *x);

// # Safety
// `a` is a live algebra handle; `x` an element of it; `out` is writable.
enum LvStatus lv_element_to_string(const struct LvAlgebra *a,
                                   const struct LvElement *x,
                                   char **out);

// # Safety
// `a` is a live algebra handle; `x`, `y` are elements of it; `out` is writable.
enum LvStatus lv_element_mul(const struct LvAlgebra *a,
                             const struct LvElement *x,
                             const struct LvElement *y,
                             struct LvElement **out);

// # Safety
// `x` is a live element handle; `out` is writable.
enum LvStatus lv_element_star(const struct LvElement *x, struct LvElement **out);

// # Safety
// `x` is a live element handle.
bool lv_element_is_zero(const struct LvElement *x);

// Builds a representation of `g` on `ℓ^p`. `kind` is `boundary`, `germ`,
// `shift:N` or `germ-shift:N`; `depth` bounds the truncation.
//
// # Safety
// `g` is a live graph handle; `kind` is a nul-terminated string; `out` is writable.
enum LvStatus lv_rep_build(const struct LvGraph *g,
                           const char *kind,
                           double p,
                           size_t depth,
                           struct LvRep **out);

// # Safety
// `r` is null or a live representation handle.
void lv_rep_free(struct LvRep *r);

// Number of atoms of the underlying measure space.
//
// # Safety
// `r` is a live representation handle.
size_t lv_rep_dim(const struct LvRep *r);

// Whether every generator image is a spatial partial isometry and the
// defining relations hold exactly.
//
// # Safety
// `r` is a live representation handle; `spatial` and `max_residual` are writable.
enum LvStatus lv_rep_check(const struct LvRep *r, bool *spatial, double *max_residual);

// The representation as a JSON bundle.
//
// # Safety
// `r` is a live representation handle; `out` is writable.
enum LvStatus lv_rep_to_json(const struct LvRep *r, char **out);

// Certified bounds `lower ≤ ‖ρ(x)‖_p ≤ upper` on the exactly represented
// part of the truncated space. `certified` reports whether the interval
// meets the default relative tolerance.
//
// # Safety
// `r` is a live representation handle of the graph `x` belongs to; the
// out-pointers are writable.
enum LvStatus lv_rep_norm(const struct LvRep *r,
                          const struct LvElement *x,
                          double *lower,
                          double *upper,
                          bool *certified);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEAVITT_H */
