#pragma once

#include <stdexcept>
#include <string>

namespace dminr {

enum class Errc {
    invalid_argument,
    not_found,
    parse,
    duplicate_id,
    io,
    timeout,
    protocol,
    length_mismatch,
    expired,
    internal,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace dminr
