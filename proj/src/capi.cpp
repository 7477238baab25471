#include "qjensen/qjensen.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "funcspec.hpp"
#include "runner.hpp"

// Exception boundary: the C surface never lets a C++ exception escape; the
// message lands in a thread-local slot readable via qj_last_error().

struct qj_function {
    qjensen::FunctionSpec spec;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
qj_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const qjensen::SpecError& e) {
        g_last_error = e.what();
        return QJ_ERR_INPUT;
    } catch (const qjensen::DomainError& e) {
        g_last_error = e.what();
        return QJ_ERR_INPUT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return QJ_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QJ_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QJ_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

qj_status qj_function_parse_json(const char* spec_json, qj_function** out) {
    if (!spec_json || !out) {
        g_last_error = "null argument";
        return QJ_ERR_INPUT;
    }
    *out = nullptr;
    return guarded([&]() -> qj_status {
        auto* handle = new qj_function{qjensen::parse_function_spec_text(spec_json)};
        *out = handle;
        return QJ_OK;
    });
}

void qj_function_free(qj_function* f) { delete f; }

qj_status qj_function_eval(const qj_function* f, const double x[4], double value[4], int* kind) {
    if (!f || !x || !value || !kind) {
        g_last_error = "null argument";
        return QJ_ERR_INPUT;
    }
    return guarded([&]() -> qj_status {
        const qjensen::EvalResult r = f->spec.eval({x[0], x[1], x[2], x[3]});
        *kind = static_cast<int>(r.kind);
        value[0] = r.value.x0;
        value[1] = r.value.x1;
        value[2] = r.value.x2;
        value[3] = r.value.x3;
        return QJ_OK;
    });
}

qj_status qj_function_log_abs(const qj_function* f, const double x[4], double* out) {
    if (!f || !x || !out) {
        g_last_error = "null argument";
        return QJ_ERR_INPUT;
    }
    return guarded([&]() -> qj_status {
        *out = f->spec.log_abs({x[0], x[1], x[2], x[3]});
        return QJ_OK;
    });
}

qj_status qj_run(const qj_function* f, const char* command, const char* options_json,
                 char** report_json) {
    if (!f || !command || !report_json) {
        g_last_error = "null argument";
        return QJ_ERR_INPUT;
    }
    *report_json = nullptr;
    return guarded([&]() -> qj_status {
        nlohmann::json opts_doc;
        if (options_json && *options_json) {
            try {
                opts_doc = nlohmann::json::parse(options_json);
            } catch (const nlohmann::json::exception& e) {
                throw qjensen::SpecError(std::string("options error: invalid JSON: ") + e.what());
            }
        }
        const qjensen::RunOptions opts = qjensen::parse_run_options(opts_doc);
        const qjensen::RunOutcome outcome = qjensen::run_command(f->spec, command, opts);
        *report_json = dup_string(outcome.report.dump(2));
        if (!*report_json) {
            g_last_error = "out of memory";
            return QJ_ERR_INTERNAL;
        }
        return outcome.exit_code == 0 ? QJ_OK : QJ_ERR_TOLERANCE;
    });
}

qj_status qj_render_text(const char* report_json, char** text_out) {
    if (!report_json || !text_out) {
        g_last_error = "null argument";
        return QJ_ERR_INPUT;
    }
    *text_out = nullptr;
    return guarded([&]() -> qj_status {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(report_json);
        } catch (const nlohmann::json::exception& e) {
            throw qjensen::SpecError(std::string("report error: invalid JSON: ") + e.what());
        }
        *text_out = dup_string(qjensen::render_report_text(doc));
        if (!*text_out) {
            g_last_error = "out of memory";
            return QJ_ERR_INTERNAL;
        }
        return QJ_OK;
    });
}

void qj_string_free(char* s) { std::free(s); }

const char* qj_last_error(void) { return g_last_error.c_str(); }

} // extern "C"
