#pragma once

#include <stdexcept>
#include <string>

namespace lsxgc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (ragged CSV, bad cell, bad magic bytes, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Shape or size constraint violated (N too small, p out of range, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Dataset manifest problem; message names the offending subject.
class ManifestError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or otherwise numerically invalid input.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Symmetric factorization broke down (singular or badly indefinite matrix).
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Simulated trajectory blew up despite the stability bound.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Invalid estimator / classifier configuration (gamma <= 0, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Labels unusable for the requested operation (single class, not 0/1).
class InvalidLabelsError : public Error {
public:
    using Error::Error;
};

/// Stratified split impossible at the requested fraction.
class SplitError : public Error {
public:
    using Error::Error;
};

/// Metric undefined for the given inputs (single-class AUC, all-zero truth).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

} // namespace lsxgc
