#pragma once

#include <stdexcept>
#include <string>

namespace topoloss {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when external data (files, buffers) cannot be interpreted.
/// `offset` is the byte offset of the offending token when known, else -1.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, long long offset = -1)
        : std::runtime_error(what), offset_(offset) {}

    long long offset() const noexcept { return offset_; }

private:
    long long offset_;
};

}  // namespace topoloss
