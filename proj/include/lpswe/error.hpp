#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpswe {

/// Base class for every error raised by the solver.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed mesh file or mesh violating a connectivity invariant.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Water depth (or specific volume) left the admissible set.
class PositivityError : public Error {
public:
    PositivityError(const std::string& what, std::size_t cell, double suggested_dt = 0.0)
        : Error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell), suggested_dt_(suggested_dt) {}

    std::size_t cell() const noexcept { return cell_; }
    /// A time step that satisfies the stability constraint, or 0 when unknown.
    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    std::size_t cell_;
    double suggested_dt_;
};

class CflError : public Error {
public:
    CflError(const std::string& what, double cfl) : Error(what), cfl_(cfl) {}
    double cfl() const noexcept { return cfl_; }

private:
    double cfl_;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace lpswe
