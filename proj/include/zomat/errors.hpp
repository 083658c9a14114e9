#pragma once

#include <stdexcept>
#include <string>

namespace zomat {

// Malformed external input (pattern files, certificates, traces).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Caller violated a documented precondition or guard.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised by assembly when upstream classification handed it an inconsistent
// trace. Never expected on valid traces; callers treat it as a retry signal.
class InternalConsistencyError : public std::logic_error {
public:
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace zomat
