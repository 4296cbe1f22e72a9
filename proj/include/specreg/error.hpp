#pragma once

#include <stdexcept>
#include <string>

namespace specreg {

// Failure category carried alongside the message so callers and tests can
// dispatch on the kind of failure instead of parsing strings.
enum class Errc {
    dimension_mismatch,
    channel_mismatch,
    size_cap,
    parse,
    non_finite,
    not_converged,
    invalid_argument,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace specreg
