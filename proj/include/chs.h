/* C interface to the phase-field simulation library.
 *
 * All entry points return a status code (CHS_OK on success) and report
 * details through caller-supplied buffers.  Configurations are opaque
 * handles created from config text or files and released with
 * chs_config_free.
 */

#ifndef CHS_H
#define CHS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct chs_config chs_config;

enum chs_status {
    CHS_OK = 0,
    CHS_ERR_NON_CONVERGENCE = 1,
    CHS_ERR_UNBOUNDED = 2,
    CHS_ERR_NOT_DIFFERENTIABLE = 3,
    CHS_ERR_DOMAIN_MISMATCH = 4,
    CHS_ERR_DOMAIN_VIOLATION = 5,
    CHS_ERR_NOT_MULTIPLICATIVE = 6,
    CHS_ERR_BLOWUP = 7,
    CHS_ERR_MEAN_MISMATCH = 8,
    CHS_ERR_PARSE = 9,
    CHS_ERR_VALIDATION = 10,
    CHS_ERR_IO = 11,
    CHS_ERR_ASSERT = 12,
    CHS_ERR_INVALID_ARGUMENT = 100,
    CHS_ERR_STUDY_FAILED = 101,
    CHS_ERR_INTERNAL = 102
};

const char* chs_status_name(int status);

/* Parse a configuration; on failure returns NULL and fills err (if given). */
chs_config* chs_config_from_file(const char* path, char* err, size_t err_len);
chs_config* chs_config_from_text(const char* text, char* err, size_t err_len);
void chs_config_free(chs_config* cfg);

/* Overrides applied after parsing. */
int chs_config_set_seed(chs_config* cfg, uint64_t seed);
int chs_config_set_paths(chs_config* cfg, int n_paths);
int chs_config_set_out_dir(chs_config* cfg, const char* dir);

/* Resolved configuration text; returns the number of bytes that the full
 * echo needs (excluding the terminator), truncating to the buffer. */
size_t chs_config_echo(const chs_config* cfg, char* buf, size_t len);

/* Run one trajectory and write all artifacts; run_dir receives the run
 * directory path. */
int chs_run_simulate(const chs_config* cfg, char* run_dir, size_t run_dir_len,
                     char* err, size_t err_len);

/* Dispatch a named study: lambda_refinement, epsilon_smoothing,
 * continuous_dependence, picard_contraction, regularity_study.  Returns
 * CHS_ERR_STUDY_FAILED when the study tables fail their assertions. */
int chs_run_study(const chs_config* cfg, const char* name, char* run_dir,
                  size_t run_dir_len, char* err, size_t err_len);

/* Run the library invariant battery; the report is written to `report`
 * (truncated to the buffer, full length returned through *report_len if
 * non-NULL).  Returns CHS_OK when every check passes. */
int chs_run_verify(char* report, size_t report_len, size_t* full_len);

#ifdef __cplusplus
}
#endif

#endif
