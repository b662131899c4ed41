#pragma once

#include <stdexcept>
#include <string>

namespace catq {

// Failure classes map one-to-one onto C API status codes and CLI exit codes.
enum class ErrorKind {
    Config,       // invalid parameters or configuration
    Numerical,    // solver failure, broken invariant
    Convergence,  // truncation or resource limit not met
    Dimension,    // shape/basis mismatch, sizing overflow
    Extent,       // phase-space window too small for the state
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return {ErrorKind::Config, msg}; }
inline Error numerical_error(const std::string& msg) { return {ErrorKind::Numerical, msg}; }
inline Error convergence_error(const std::string& msg) { return {ErrorKind::Convergence, msg}; }
inline Error dimension_error(const std::string& msg) { return {ErrorKind::Dimension, msg}; }
inline Error extent_error(const std::string& msg) { return {ErrorKind::Extent, msg}; }
inline Error io_error(const std::string& msg) { return {ErrorKind::Io, msg}; }

}  // namespace catq
