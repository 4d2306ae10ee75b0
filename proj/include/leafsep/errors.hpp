#pragma once

#include <stdexcept>
#include <string>

namespace leafsep {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid parameters, malformed configuration, unknown keys.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// File-level problems (missing files, broken headers, bad rows).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ParseError : public IoError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : IoError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class UnsupportedFormat : public IoError {
public:
    explicit UnsupportedFormat(const std::string& msg) : IoError(msg) {}
};

/// Failures of geometric computations on valid input data.
class ComputeError : public Error {
public:
    explicit ComputeError(const std::string& msg) : Error(msg) {}
};

class EmptyCloud : public ComputeError {
public:
    explicit EmptyCloud(const std::string& msg) : ComputeError(msg) {}
};

class MissingColor : public ComputeError {
public:
    explicit MissingColor(const std::string& msg) : ComputeError(msg) {}
};

class DegenerateNeighborhood : public ComputeError {
public:
    explicit DegenerateNeighborhood(const std::string& msg) : ComputeError(msg) {}
};

class DegenerateSurface : public ComputeError {
public:
    explicit DegenerateSurface(const std::string& msg) : ComputeError(msg) {}
};

class TooSparse : public ComputeError {
public:
    explicit TooSparse(const std::string& msg) : ComputeError(msg) {}
};

class IndexMismatch : public ComputeError {
public:
    explicit IndexMismatch(const std::string& msg) : ComputeError(msg) {}
};

}  // namespace leafsep
