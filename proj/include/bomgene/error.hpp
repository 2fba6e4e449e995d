#pragma once

#include <stdexcept>
#include <string>

namespace bomgene {

/// Failure categories surfaced by the library. The CLI maps `Validation`
/// and `Usage` to exit code 2, everything else to 1.
enum class ErrorKind {
    Validation,
    Parse,
    Usage,
    Runtime,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error validation_error(const std::string& what) {
    return Error(ErrorKind::Validation, what);
}

inline Error parse_error(const std::string& what) {
    return Error(ErrorKind::Parse, what);
}

inline Error runtime_error(const std::string& what) {
    return Error(ErrorKind::Runtime, what);
}

} // namespace bomgene
