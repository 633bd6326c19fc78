#pragma once

#include <stdexcept>
#include <string>

namespace stx {

/// Error classes surfaced by the library. The CLI maps each value to a
/// distinct process exit code.
enum class errc {
    invalid_argument,
    bad_format,
    truncated,
    non_dense,
    non_finite,
    no_clusters,
    zero_denominator,
    degenerate_model,
    rank_deficient,
    factorization_failed,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_argument: return "invalid_argument";
        case errc::bad_format: return "bad_format";
        case errc::truncated: return "truncated";
        case errc::non_dense: return "non_dense";
        case errc::non_finite: return "non_finite";
        case errc::no_clusters: return "no_clusters";
        case errc::zero_denominator: return "zero_denominator";
        case errc::degenerate_model: return "degenerate_model";
        case errc::rank_deficient: return "rank_deficient";
        case errc::factorization_failed: return "factorization_failed";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace stx
