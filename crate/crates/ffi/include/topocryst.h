#ifndef TOPOCRYST_H
#define TOPOCRYST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_INVALID_ARGUMENT = 4,
  TC_STATUS_DOMAIN = 5,
  TC_STATUS_NOT_CONVERGED = 6,
  TC_STATUS_PANIC = 7,
} TcStatus;

/**
 * Lattice class; 2D and 3D share one enumeration.
 */
typedef enum {
  TC_LATTICE_CLASS_NOT_OS = 0,
  TC_LATTICE_CLASS_CUBIC = 1,
  TC_LATTICE_CLASS_BCC = 2,
  TC_LATTICE_CLASS_FCC = 3,
  TC_LATTICE_CLASS_SQUARE = 4,
  TC_LATTICE_CLASS_TRIANGULAR = 5,
  /**
   * Dimension without a classifier.
   */
  TC_LATTICE_CLASS_UNCLASSIFIED = 6,
} TcLatticeClass;

typedef enum {
  TC_FORMAT_XYZ = 0,
  TC_FORMAT_OBJ = 1,
  TC_FORMAT_JSON = 2,
} TcFormat;

/**
 * A building block (opaque).
 */
typedef struct TcBlock TcBlock;

/**
 * A finite piece of a net (opaque).
 */
typedef struct TcNet TcNet;

typedef struct {
  double alpha_sq;
  size_t k_count;
  size_t group_order;
  bool is_os;
  TcLatticeClass class_;
} TcLatticeSummary;

typedef struct {
  size_t point_group_order;
  size_t proper;
  size_t improper;
  bool strongly_isotropic;
  bool chiral;
} TcSymmetry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call.
 */
const char *tc_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void tc_string_free(char *s);

/**
 * Builtin block: `laves`, `diamond`, `honeycomb` or `cubic`.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
TcStatus tc_block_builtin(const char *name, TcBlock **out);

/**
 * Block from QG text with `v=` annotations.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
TcStatus tc_block_parse(const char *text, TcBlock **out);

/**
 * # Safety
 * `b` must come from this library or be null.
 */
void tc_block_free(TcBlock *b);

/**
 * Dimension of the block, 0 for null.
 *
 * # Safety
 * `b` must be a valid handle or null.
 */
size_t tc_block_dim(const TcBlock *b);

/**
 * # Safety
 * `b` must be a valid handle or null.
 */
size_t tc_block_vertex_count(const TcBlock *b);

/**
 * First Betti number of the quotient graph.
 *
 * # Safety
 * `b` must be a valid handle or null.
 */
size_t tc_block_betti(const TcBlock *b);

/**
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_block_is_harmonic(const TcBlock *b, bool *out);

/**
 * Sum of squared edge lengths.
 *
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_block_energy(const TcBlock *b, double *out);

/**
 * Period lattice basis, one vector per row, into `out[0..d*d]`.
 *
 * # Safety
 * `b` must be a valid handle; `out` must hold `len` doubles.
 */
TcStatus tc_block_period_basis(const TcBlock *b, double *out, size_t len);

/**
 * QG text of the block.
 *
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_block_to_qg(const TcBlock *b, char **out);

/**
 * Analyzes the lattice spanned by the `d` rows of `rows` (`d*d` doubles).
 * Integer-valued input is analyzed in exact arithmetic.
 *
 * # Safety
 * `rows` must hold `d*d` doubles; `out` must be writable.
 */
TcStatus tc_lattice_analyze(const double *rows, size_t d, TcLatticeSummary *out);

/**
 * Smallest ring length up to `cap`.
 *
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_rings_girth(const TcBlock *b, size_t cap, size_t *out);

/**
 * Number of rings of `length` through vertex index `vertex`.
 *
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_rings_count(const TcBlock *b, size_t vertex, size_t length, size_t *out);

/**
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_symmetry(const TcBlock *b, TcSymmetry *out);

/**
 * Standard realization of the block's quotient graph (unit covolume).
 *
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_standardize(const TcBlock *b,
                        double tol,
                        size_t max_iter,
                        uint64_t seed,
                        TcBlock **out);

/**
 * Net on the cells `[−n, n]^d`.
 *
 * # Safety
 * `b` must be a valid handle; `out` must be writable.
 */
TcStatus tc_net_build(const TcBlock *b, int64_t n, TcNet **out);

/**
 * # Safety
 * `net` must come from this library or be null.
 */
void tc_net_free(TcNet *net);

/**
 * # Safety
 * `net` must be a valid handle or null.
 */
size_t tc_net_vertex_count(const TcNet *net);

/**
 * # Safety
 * `net` must be a valid handle or null.
 */
size_t tc_net_bond_count(const TcNet *net);

/**
 * Serialized net in the chosen format.
 *
 * # Safety
 * `net` must be a valid handle; `out` must be writable.
 */
TcStatus tc_net_export(const TcNet *net, TcFormat format, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOPOCRYST_H */
