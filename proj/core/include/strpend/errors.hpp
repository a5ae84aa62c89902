#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strpend {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or state violates one of its invariants.
/// `field()` is the dotted path of the offending value, e.g. "disc.n_elements".
class ModelError : public Error {
public:
    ModelError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Rotation by pi: the Cayley chart does not cover it.
class ChartBoundaryError : public Error {
public:
    using Error::Error;
};

/// Two adjacent string nodes coincide, so the tension direction is undefined.
class DegenerateElementError : public Error {
public:
    DegenerateElementError(std::size_t element, const std::string& message)
        : Error(message), element_(element) {}

    /// Zero-based element index.
    std::size_t element() const noexcept { return element_; }

private:
    std::size_t element_;
};

/// Newton iteration failed to reach the requested residual tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& message, double residual_norm, int iterations)
        : Error(message), residual_norm_(residual_norm), iterations_(iterations) {}

    double residual_norm() const noexcept { return residual_norm_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_norm_;
    int iterations_;
};

/// s_p left the admissible interval [b, L - N * min_element_length].
class ReelLimitError : public Error {
public:
    ReelLimitError(const std::string& message, double s_p) : Error(message), s_p_(s_p) {}

    double s_p() const noexcept { return s_p_; }

private:
    double s_p_;
};

/// Malformed or invalid run configuration.
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, int line = 0, std::string field = {})
        : Error(message), line_(line), field_(std::move(field)) {}

    /// One-based line number in the source text, 0 when not tied to a line.
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

}  // namespace strpend
