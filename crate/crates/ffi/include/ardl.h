#ifndef ARDL_H
#define ARDL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArdlTest {
  ARDL_TEST_ADF = 0,
  ARDL_TEST_DFGLS = 1,
  ARDL_TEST_ZA = 2,
} ArdlTest;

typedef enum ArdlCase {
  ARDL_CASE_NONE = 0,
  ARDL_CASE_CONSTANT = 1,
  ARDL_CASE_CONSTANT_TREND = 2,
} ArdlCase;

typedef enum ArdlLagSelection {
  ARDL_LAG_SELECTION_AIC = 0,
  ARDL_LAG_SELECTION_BIC = 1,
  ARDL_LAG_SELECTION_FIXED = 2,
} ArdlLagSelection;

typedef enum ArdlBreakModel {
  ARDL_BREAK_MODEL_INTERCEPT = 0,
  ARDL_BREAK_MODEL_TREND = 1,
  ARDL_BREAK_MODEL_BOTH = 2,
} ArdlBreakModel;

typedef enum ArdlStatus {
  ARDL_STATUS_OK = 0,
  ARDL_STATUS_NULL_POINTER = 1,
  ARDL_STATUS_INVALID_ARGUMENT = 2,
  ARDL_STATUS_TOO_SHORT = 3,
  ARDL_STATUS_RANK_DEFICIENT = 4,
  ARDL_STATUS_DEGENERATE = 5,
  ARDL_STATUS_MISSING_CRITICAL_VALUES = 6,
  ARDL_STATUS_DUMMY_OUTSIDE_SAMPLE = 7,
  ARDL_STATUS_PARSE = 8,
  ARDL_STATUS_UNKNOWN_VARIABLE = 9,
  ARDL_STATUS_I2_DETECTED = 10,
  ARDL_STATUS_IO = 11,
  ARDL_STATUS_PANIC = 12,
} ArdlStatus;

typedef enum ArdlConclusion {
  ARDL_CONCLUSION_INCONCLUSIVE = 0,
  ARDL_CONCLUSION_COINTEGRATED = 1,
  ARDL_CONCLUSION_NOT_COINTEGRATED = 2,
} ArdlConclusion;

typedef enum ArdlReportFormat {
  ARDL_REPORT_FORMAT_MARKDOWN = 0,
  ARDL_REPORT_FORMAT_CSV = 1,
  ARDL_REPORT_FORMAT_JSON = 2,
} ArdlReportFormat;

/**
 * Estimated error-correction model.
 */
typedef struct ArdlEcm ArdlEcm;

/**
 * Columns of equal length on a daily calendar.
 */
typedef struct ArdlPanel ArdlPanel;

typedef struct ArdlUnitRootOptions {
  enum ArdlTest test;
  enum ArdlCase case_;
  /**
   * Negative for the default `floor(12 (T/100)^(1/4))`.
   */
  int64_t max_lags;
  enum ArdlLagSelection lag_selection;
  /**
   * Lag order when `lag_selection` is fixed.
   */
  size_t fixed_lags;
  /**
   * Zivot-Andrews only.
   */
  enum ArdlBreakModel break_model;
  /**
   * Zivot-Andrews only.
   */
  double trim;
} ArdlUnitRootOptions;

typedef struct ArdlUnitRootResult {
  double statistic;
  size_t lags_used;
  size_t nobs;
  /**
   * Critical values at 1, 5 and 10%.
   */
  double critical_values[3];
  /**
   * Unit root rejected at 1, 5 and 10%.
   */
  bool rejects[3];
  /**
   * Observations before the break, -1 when not applicable.
   */
  int64_t break_index;
} ArdlUnitRootResult;

/**
 * Model specification; regressor names refer to panel columns.
 */
typedef struct ArdlModelSpec {
  const char *dependent;
  const char *const *regressors;
  size_t n_regressors;
  /**
   * Exogenous variables, entering in first differences. May be null.
   */
  const char *const *exogenous;
  size_t n_exogenous;
  enum ArdlCase case_;
  size_t p;
  size_t q;
} ArdlModelSpec;

typedef struct ArdlCoefficient {
  double estimate;
  double std_error;
  double t_value;
  double p_value;
} ArdlCoefficient;

typedef struct ArdlBoundsLevel {
  /**
   * Significance level in percent.
   */
  double level;
  double lower_bound;
  double upper_bound;
  enum ArdlConclusion conclusion;
} ArdlBoundsLevel;

typedef struct ArdlBoundsResult {
  double f_statistic;
  size_t df1;
  size_t df2;
  size_t k;
  /**
   * Bounds case 1 to 5.
   */
  uint32_t bounds_case;
  /**
   * 10, 5, 2.5 and 1%.
   */
  struct ArdlBoundsLevel levels[4];
} ArdlBoundsResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *ardl_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *ardl_version(void);

/**
 * ADF with a constant, AIC lag selection and the default maximum lag.
 */
struct ArdlUnitRootOptions ardl_unit_root_options_default(void);

/**
 * Unit-root test of `values[0..len]`.
 *
 * # Safety
 * `values` must point to `len` doubles and `out` to writable storage.
 */
enum ArdlStatus ardl_unit_root(const double *values,
                               size_t len,
                               struct ArdlUnitRootOptions options,
                               struct ArdlUnitRootResult *out);

/**
 * New empty panel with `nobs` rows; null when `nobs` is zero.
 */
struct ArdlPanel *ardl_panel_new(size_t nobs);

/**
 * Copies `values[0..len]` into a new column `name`.
 *
 * # Safety
 * `panel` must come from [`ardl_panel_new`], `name` must be a nul-terminated
 * string and `values` must point to `len` doubles.
 */
enum ArdlStatus ardl_panel_add_column(struct ArdlPanel *panel,
                                      const char *name,
                                      const double *values,
                                      size_t len);

/**
 * # Safety
 * `panel` must be null or come from [`ardl_panel_new`] and not be used again.
 */
void ardl_panel_free(struct ArdlPanel *panel);

/**
 * Estimates the error-correction regression of `spec` on `panel`.
 *
 * # Safety
 * `panel` must be a live panel handle, `spec` valid and `out` writable.
 */
enum ArdlStatus ardl_ecm_fit(const struct ArdlPanel *panel,
                             const struct ArdlModelSpec *spec,
                             struct ArdlEcm **out);

/**
 * # Safety
 * `ecm` must be null or come from [`ardl_ecm_fit`] and not be used again.
 */
void ardl_ecm_free(struct ArdlEcm *ecm);

/**
 * Speed of adjustment.
 *
 * # Safety
 * `ecm` must be null or a live handle.
 */
enum ArdlStatus ardl_ecm_alpha(const struct ArdlEcm *ecm, struct ArdlCoefficient *out);

/**
 * Long-run coefficient of regressor `index` (in specification order).
 *
 * # Safety
 * `ecm` must be a live handle and `out` writable.
 */
enum ArdlStatus ardl_ecm_long_run(const struct ArdlEcm *ecm,
                                  size_t index,
                                  struct ArdlCoefficient *out);

/**
 * Number of regression coefficients; 0 for a null handle.
 *
 * # Safety
 * `ecm` must be null or a live handle.
 */
size_t ardl_ecm_num_coefficients(const struct ArdlEcm *ecm);

/**
 * Coefficient `index` of the regression and, when `name` is not null, its
 * column name. The name pointer lives as long as the handle.
 *
 * # Safety
 * `ecm` must be a live handle; `out` writable; `name` null or writable.
 */
enum ArdlStatus ardl_ecm_coefficient(const struct ArdlEcm *ecm,
                                     size_t index,
                                     struct ArdlCoefficient *out,
                                     const char **name);

/**
 * Number of observations in the estimation sample; 0 for a null handle.
 *
 * # Safety
 * `ecm` must be null or a live handle.
 */
size_t ardl_ecm_nobs(const struct ArdlEcm *ecm);

/**
 * Copies up to `len` residuals into `buf`.
 *
 * # Safety
 * `ecm` must be a live handle and `buf` must hold `len` doubles.
 */
enum ArdlStatus ardl_ecm_residuals(const struct ArdlEcm *ecm, double *buf, size_t len);

/**
 * Bounds F-test. `bounds_case` is 1 to 5, or 0 for the default of the
 * deterministic case.
 *
 * # Safety
 * `panel` must be a live handle, `spec` valid and `out` writable.
 */
enum ArdlStatus ardl_bounds_test(const struct ArdlPanel *panel,
                                 const struct ArdlModelSpec *spec,
                                 uint32_t bounds_case,
                                 struct ArdlBoundsResult *out);

/**
 * Runs a manifest and configuration and writes the reports into `out_dir`.
 * `exit_code` receives 0 when every model ran and 2 when some were skipped.
 *
 * # Safety
 * String arguments must be nul-terminated; `exit_code` null or writable.
 */
enum ArdlStatus ardl_run_pipeline(const char *manifest,
                                  const char *config,
                                  const char *out_dir,
                                  enum ArdlReportFormat format,
                                  uint64_t seed,
                                  size_t jobs,
                                  int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARDL_H */
