#pragma once

#include <stdexcept>
#include <string>

namespace chainscope {

enum class ErrorKind {
    InvalidArgument,
    InfeasibleResolution,  // requested eps/delta cannot be resolved by any admissible cover
    PrecisionExhausted,    // a high-precision input ran out of digits
    Io,                    // a file could not be opened
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::string hint = {})
        : std::runtime_error(what), kind_(kind), hint_(std::move(hint)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& hint() const { return hint_; }

private:
    ErrorKind kind_;
    std::string hint_;
};

[[noreturn]] inline void invalid(const std::string& what, std::string hint = {}) {
    throw Error(ErrorKind::InvalidArgument, what, std::move(hint));
}

[[noreturn]] inline void io_failure(const std::string& what) { throw Error(ErrorKind::Io, what); }

}  // namespace chainscope
