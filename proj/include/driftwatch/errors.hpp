#pragma once

#include <stdexcept>
#include <string>

namespace driftwatch {

/// Base class for all errors raised by the monitoring engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A score lies outside the configured binning domain.
class DomainError : public Error {
public:
    DomainError(double value, std::size_t index, const std::string& what)
        : Error(what), value_(value), index_(index) {}
    double value() const { return value_; }
    std::size_t index() const { return index_; }

private:
    double value_;
    std::size_t index_;
};

/// Two distributions were combined despite having different binnings.
class BinningMismatchError : public Error {
public:
    using Error::Error;
};

/// A window (or history) holds no samples where some were required.
class EmptyWindowError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (threshold out of range, negative epsilon, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Mutation attempted on a window that is already closed.
class WindowClosedError : public Error {
public:
    using Error::Error;
};

/// An event was routed to an accumulator for a different window.
class RoutingError : public Error {
public:
    using Error::Error;
};

/// Event timestamp precedes the window origin.
class PreEpochError : public Error {
public:
    using Error::Error;
};

/// Temporal baseline requested before any history exists.
class NoBaselineError : public Error {
public:
    using Error::Error;
};

/// Snapshot integrity, version, or config-digest failure.
class SnapshotError : public Error {
public:
    using Error::Error;
};

/// CSV stream unusable (missing header, error budget exceeded).
class CsvError : public Error {
public:
    using Error::Error;
};

}  // namespace driftwatch
