#include "dminr/error.hpp"

namespace dminr {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::not_found: return "not_found";
    case Errc::parse: return "parse";
    case Errc::duplicate_id: return "duplicate_id";
    case Errc::io: return "io";
    case Errc::timeout: return "timeout";
    case Errc::protocol: return "protocol";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::expired: return "expired";
    case Errc::internal: return "internal";
    }
    return "internal";
}

} // namespace dminr
