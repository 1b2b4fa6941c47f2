#ifndef WIREPHASE_H
#define WIREPHASE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WpMassCoupling {
  WP_MASS_COUPLING_FIXED_MASS = 0,
  WP_MASS_COUPLING_TRACKS_DISTANCE = 1,
} WpMassCoupling;

typedef enum WpMethod {
  WP_METHOD_CLOSED_FORM = 0,
  WP_METHOD_NUMERICAL = 1,
} WpMethod;

typedef enum WpRegime {
  WP_REGIME_NATIVE = 0,
  WP_REGIME_YUKAWA_EXTRAPOLATED = 1,
} WpRegime;

typedef enum WpStatus {
  WP_STATUS_OK = 0,
  WP_STATUS_NULL_POINTER = 1,
  WP_STATUS_INVALID_PARAMETER = 2,
  WP_STATUS_DOMAIN = 3,
  WP_STATUS_NON_CONVERGENCE = 4,
  WP_STATUS_DEGENERATE_SIGNAL = 5,
  WP_STATUS_RANGE = 6,
  WP_STATUS_UNSUPPORTED_MODEL = 7,
  WP_STATUS_INDEX_OUT_OF_BOUNDS = 8,
  WP_STATUS_PANIC = 9,
} WpStatus;

/*
 Opaque exclusion-curve handle.
 */
typedef struct WpCurve WpCurve;

/*
 Opaque scenario handle.
 */
typedef struct WpScenario WpScenario;

/*
 Phase difference and the two arm phases, in radians.
 */
typedef struct WpPhase {
  double delta_phi;
  double phi_lower;
  double phi_upper;
  /*
   Number of warnings raised; the texts are not exposed.
   */
  uint32_t warning_count;
} WpPhase;

typedef struct WpDistanceOptimum {
  double distance;
  double alpha_limit;
  double flatness;
  uint32_t regime;
} WpDistanceOptimum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the calling thread's last error message into `buf` (NUL
 terminated, truncated to `len`). Returns the full message length
 excluding the terminator, or 0 if there is none.

 # Safety
 `buf` must be null or valid for `len` bytes.
 */
size_t wp_last_error_message(char *buf, size_t len);

/*
 Library version as a static NUL-terminated string.
 */
const char *wp_version(void);

/*
 Reference scenario: slow cesium beam, 1 m tungsten-density wire of
 100 µm side at d = 100 µm, e = 1 mm, Yukawa α = 1, λ = 100 µm,
 threshold 1 mrad.
 */
struct WpScenario *wp_scenario_reference(void);

/*
 Builds a Newtonian scenario from SI parameters; pick the model with the
 `wp_scenario_set_*` calls.

 # Safety
 `out` must be valid for writing a pointer.
 */
enum WpStatus wp_scenario_new(double atom_mass,
                              double speed,
                              double wire_length,
                              double wire_density,
                              double wire_side,
                              double distance,
                              double grating_spacing,
                              double beam_separation,
                              double detection_limit,
                              struct WpScenario **out);

/*
 # Safety
 `scenario` must be null or a handle from this library not yet freed.
 */
void wp_scenario_free(struct WpScenario *scenario);

/*
 # Safety
 `scenario` must be a live handle.
 */
enum WpStatus wp_scenario_set_newtonian(struct WpScenario *scenario);

/*
 # Safety
 `scenario` must be a live handle.
 */
enum WpStatus wp_scenario_set_yukawa(struct WpScenario *scenario, double alpha, double lambda);

/*
 # Safety
 `scenario` must be a live handle.
 */
enum WpStatus wp_scenario_set_extradim(struct WpScenario *scenario,
                                       uint32_t n,
                                       double alpha,
                                       double lambda);

/*
 Moves the wire to `distance`, keeping its mass.

 # Safety
 `scenario` must be a live handle.
 */
enum WpStatus wp_scenario_set_distance(struct WpScenario *scenario, double distance);

/*
 Quadrature tolerance and subdivision budget used by numerical methods.

 # Safety
 `scenario` must be a live handle.
 */
enum WpStatus wp_scenario_set_quadrature(struct WpScenario *scenario,
                                         double relative_tolerance,
                                         size_t max_subdivisions);

/*
 `G M m / (ħ v)` in radians.

 # Safety
 `scenario` must be a live handle; `out` valid for writing.
 */
enum WpStatus wp_scenario_prefactor(const struct WpScenario *scenario, double *out);

/*
 # Safety
 `scenario` must be a live handle; `out` valid for writing.
 */
enum WpStatus wp_phase_difference(const struct WpScenario *scenario,
                                  enum WpMethod phase_method,
                                  struct WpPhase *out);

/*
 Smallest excluded strength for the scenario's model and range.

 # Safety
 `scenario` must be a live handle; `out` valid for writing.
 */
enum WpStatus wp_alpha_limit(const struct WpScenario *scenario,
                             enum WpMethod phase_method,
                             double *out);

/*
 # Safety
 `out` must be valid for writing.
 */
enum WpStatus wp_bessel_k0(double x, double *out);

/*
 `2F1(1/2, (n+1)/2; 3/2; -z^2)`.

 # Safety
 `out` must be valid for writing.
 */
enum WpStatus wp_hyp2f1_half(uint32_t n, double z, double *out);

/*
 Exclusion curve over `points` log-spaced ranges. `n = 0` scans Yukawa,
 `n >= 1` the extra-dimension family. The curve is returned in `out` and
 must be released with [`wp_curve_free`].

 # Safety
 `scenario` must be a live handle; `out` valid for writing.
 */
enum WpStatus wp_scan(const struct WpScenario *scenario,
                      uint32_t n,
                      double lambda_min,
                      double lambda_max,
                      size_t points,
                      double distance,
                      enum WpMassCoupling mass_coupling,
                      enum WpMethod phase_method,
                      struct WpCurve **out);

/*
 Number of evaluated points (failed grid points are not counted).

 # Safety
 `curve` must be null or a live handle.
 */
size_t wp_curve_len(const struct WpCurve *curve);

/*
 Number of grid points that could not be evaluated.

 # Safety
 `curve` must be null or a live handle.
 */
size_t wp_curve_failures(const struct WpCurve *curve);

/*
 # Safety
 `curve` must be a live handle; the out pointers valid for writing.
 */
enum WpStatus wp_curve_point(const struct WpCurve *curve,
                             size_t index,
                             double *lambda,
                             double *alpha_limit,
                             enum WpRegime *point_regime);

/*
 # Safety
 `curve` must be null or a handle from [`wp_scan`] not yet freed.
 */
void wp_curve_free(struct WpCurve *curve);

/*
 Wire distance in `[d_min, d_max]` minimising the limit at `lambda`, with
 the wire side tracking the distance. `n` selects the family as in
 [`wp_scan`]; `regime` in the result holds a [`WpRegime`] value.

 # Safety
 `scenario` must be a live handle; `out` valid for writing.
 */
enum WpStatus wp_optimize_distance(const struct WpScenario *scenario,
                                   uint32_t n,
                                   double lambda,
                                   double d_min,
                                   double d_max,
                                   struct WpDistanceOptimum *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WIREPHASE_H */
