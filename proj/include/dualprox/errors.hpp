#pragma once

#include <stdexcept>
#include <string>

namespace dualprox {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argmin/argmax requested from an oracle does not exist.
class UnboundedError : public Error {
public:
    using Error::Error;
};

/// The problem does not provide the oracle an operation needs.
class CapabilityError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class NormEstimateError : public Error {
public:
    NormEstimateError(const std::string& what, double last_rayleigh)
        : Error(what), last_rayleigh_(last_rayleigh) {}
    [[nodiscard]] double last_rayleigh() const { return last_rayleigh_; }

private:
    double last_rayleigh_;
};

class ScheduleError : public Error {
public:
    ScheduleError(const std::string& what, long first_bad_k) : Error(what), first_bad_k_(first_bad_k) {}
    [[nodiscard]] long first_bad_k() const { return first_bad_k_; }

private:
    long first_bad_k_;
};

/// Backtracking could not satisfy the sufficient-decrease condition.
class BacktrackingError : public Error {
public:
    using Error::Error;
};

}  // namespace dualprox
