#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fewview {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent sizes, invalid geometry, malformed configuration files.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter outside its admissible range (eta <= 0, p >= 1, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input that is well-formed but degenerate for the requested operation.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A required file produced by another component is missing.
class DependencyError : public Error {
public:
    explicit DependencyError(std::string path)
        : Error("missing dependency: " + path), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// The solver produced a non-finite iterate.
class NumericalDivergenceError : public Error {
public:
    explicit NumericalDivergenceError(std::size_t iteration)
        : Error("non-finite iterate at iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

} // namespace fewview
