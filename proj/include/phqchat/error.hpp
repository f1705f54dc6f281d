#pragma once

#include <stdexcept>
#include <string>

namespace phqchat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a domain invariant (arity, range, arithmetic consistency).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Operation is not allowed in the current interview phase.
class StateError : public Error {
public:
    using Error::Error;
};

/// A script, lexicon or dataset file could not be read, parsed or validated.
class LoadError : public Error {
public:
    using Error::Error;
};

/// Storage is unavailable. Callers may retry.
class IoError : public Error {
public:
    using Error::Error;
};

/// A statistic is mathematically undefined for the given input.
/// `reason()` is a short machine-readable code such as "zero_variance".
class UndefinedStatistic : public Error {
public:
    UndefinedStatistic(std::string reason, const std::string& what)
        : Error(what), reason_(std::move(reason)) {}

    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

}  // namespace phqchat
