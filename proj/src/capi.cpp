#include "chs.h"

#include <cstring>
#include <string>

#include "chs/config.hpp"
#include "chs/io.hpp"
#include "chs/verify.hpp"

struct chs_config {
    chs::RunConfig rc;
};

namespace {

void copy_out(char* dst, size_t len, const std::string& src) {
    if (!dst || len == 0) return;
    const size_t n = std::min(len - 1, src.size());
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

int status_of(const chs::Error& e) {
    using chs::ErrorCode;
    switch (e.code()) {
        case ErrorCode::None: return CHS_OK;
        case ErrorCode::NonConvergence: return CHS_ERR_NON_CONVERGENCE;
        case ErrorCode::Unbounded: return CHS_ERR_UNBOUNDED;
        case ErrorCode::NotDifferentiable: return CHS_ERR_NOT_DIFFERENTIABLE;
        case ErrorCode::DomainMismatch: return CHS_ERR_DOMAIN_MISMATCH;
        case ErrorCode::DomainViolation: return CHS_ERR_DOMAIN_VIOLATION;
        case ErrorCode::NotMultiplicative: return CHS_ERR_NOT_MULTIPLICATIVE;
        case ErrorCode::Blowup: return CHS_ERR_BLOWUP;
        case ErrorCode::MeanMismatch: return CHS_ERR_MEAN_MISMATCH;
        case ErrorCode::ParseError: return CHS_ERR_PARSE;
        case ErrorCode::ValidationError: return CHS_ERR_VALIDATION;
        case ErrorCode::IoError: return CHS_ERR_IO;
        case ErrorCode::AssertFailed: return CHS_ERR_ASSERT;
    }
    return CHS_ERR_INTERNAL;
}

template <typename Fn>
int guarded(char* err, size_t err_len, Fn&& fn) {
    try {
        return fn();
    } catch (const chs::Error& e) {
        copy_out(err, err_len, e.what());
        return status_of(e);
    } catch (const std::exception& e) {
        copy_out(err, err_len, e.what());
        return CHS_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* chs_status_name(int status) {
    switch (status) {
        case CHS_OK: return "ok";
        case CHS_ERR_NON_CONVERGENCE: return "non_convergence";
        case CHS_ERR_UNBOUNDED: return "unbounded";
        case CHS_ERR_NOT_DIFFERENTIABLE: return "not_differentiable";
        case CHS_ERR_DOMAIN_MISMATCH: return "domain_mismatch";
        case CHS_ERR_DOMAIN_VIOLATION: return "domain_violation";
        case CHS_ERR_NOT_MULTIPLICATIVE: return "not_multiplicative";
        case CHS_ERR_BLOWUP: return "blowup";
        case CHS_ERR_MEAN_MISMATCH: return "mean_mismatch";
        case CHS_ERR_PARSE: return "parse_error";
        case CHS_ERR_VALIDATION: return "validation_error";
        case CHS_ERR_IO: return "io_error";
        case CHS_ERR_ASSERT: return "assert_failed";
        case CHS_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case CHS_ERR_STUDY_FAILED: return "study_failed";
        default: return "internal_error";
    }
}

chs_config* chs_config_from_text(const char* text, char* err, size_t err_len) {
    if (!text) {
        copy_out(err, err_len, "null config text");
        return nullptr;
    }
    try {
        return new chs_config{chs::parse_config_text(text)};
    } catch (const std::exception& e) {
        copy_out(err, err_len, e.what());
        return nullptr;
    }
}

chs_config* chs_config_from_file(const char* path, char* err, size_t err_len) {
    if (!path) {
        copy_out(err, err_len, "null config path");
        return nullptr;
    }
    try {
        return new chs_config{chs::parse_config_file(path)};
    } catch (const std::exception& e) {
        copy_out(err, err_len, e.what());
        return nullptr;
    }
}

void chs_config_free(chs_config* cfg) { delete cfg; }

int chs_config_set_seed(chs_config* cfg, uint64_t seed) {
    if (!cfg) return CHS_ERR_INVALID_ARGUMENT;
    cfg->rc.simulation.seed = seed;
    return CHS_OK;
}

int chs_config_set_paths(chs_config* cfg, int n_paths) {
    if (!cfg || n_paths < 1) return CHS_ERR_INVALID_ARGUMENT;
    cfg->rc.n_paths = n_paths;
    return CHS_OK;
}

int chs_config_set_out_dir(chs_config* cfg, const char* dir) {
    if (!cfg || !dir) return CHS_ERR_INVALID_ARGUMENT;
    cfg->rc.out_dir = dir;
    return CHS_OK;
}

size_t chs_config_echo(const chs_config* cfg, char* buf, size_t len) {
    if (!cfg) return 0;
    const std::string text = cfg->rc.echo();
    copy_out(buf, len, text);
    return text.size();
}

int chs_run_simulate(const chs_config* cfg, char* run_dir, size_t run_dir_len,
                     char* err, size_t err_len) {
    if (!cfg) return CHS_ERR_INVALID_ARGUMENT;
    return guarded(err, err_len, [&] {
        const chs::RunPaths paths = chs::emit_simulation(cfg->rc);
        copy_out(run_dir, run_dir_len, paths.root);
        return CHS_OK;
    });
}

int chs_run_study(const chs_config* cfg, const char* name, char* run_dir,
                  size_t run_dir_len, char* err, size_t err_len) {
    if (!cfg || !name) return CHS_ERR_INVALID_ARGUMENT;
    return guarded(err, err_len, [&] {
        bool passed = false;
        const chs::RunPaths paths = chs::emit_study(cfg->rc, name, &passed);
        copy_out(run_dir, run_dir_len, paths.root);
        if (!passed) {
            copy_out(err, err_len, "study assertions failed; see " + paths.report);
            return static_cast<int>(CHS_ERR_STUDY_FAILED);
        }
        return static_cast<int>(CHS_OK);
    });
}

int chs_run_verify(char* report, size_t report_len, size_t* full_len) {
    std::string text;
    bool ok = false;
    try {
        ok = chs::run_verification(text);
    } catch (const std::exception& e) {
        copy_out(report, report_len, e.what());
        return CHS_ERR_INTERNAL;
    }
    copy_out(report, report_len, text);
    if (full_len) *full_len = text.size();
    return ok ? CHS_OK : CHS_ERR_ASSERT;
}

}  // extern "C"
