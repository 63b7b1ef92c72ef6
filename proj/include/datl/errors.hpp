#pragma once

#include <stdexcept>
#include <string>

namespace datl {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input text does not look like the expected file format at all.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Input has the right shape but a cell/field failed to parse; message
// carries row/column coordinates.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A value violates a documented bound (negative GDP, share outside [0,110], ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

class UnknownCountryError : public Error {
public:
    explicit UnknownCountryError(const std::string& msg) : Error(msg) {}
};

class EmptyDatasetError : public Error {
public:
    explicit EmptyDatasetError(const std::string& msg) : Error(msg) {}
};

class IncompleteFeaturesError : public Error {
public:
    explicit IncompleteFeaturesError(const std::string& msg) : Error(msg) {}
};

class InvalidHyperparameterError : public Error {
public:
    explicit InvalidHyperparameterError(const std::string& msg) : Error(msg) {}
};

// A linear solve or similar numeric kernel failed outright.
class NumericFailureError : public Error {
public:
    explicit NumericFailureError(const std::string& msg) : Error(msg) {}
};

// Iterative solver hit its iteration cap; carries the residual violation.
class ConvergenceFailureError : public Error {
public:
    ConvergenceFailureError(const std::string& msg, double residual)
        : Error(msg), residual_violation(residual) {}
    double residual_violation;
};

class InfeasibleFractionError : public Error {
public:
    explicit InfeasibleFractionError(const std::string& msg) : Error(msg) {}
};

// Every grid point / candidate failed; message aggregates the causes.
class AllCandidatesFailedError : public Error {
public:
    explicit AllCandidatesFailedError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace datl
