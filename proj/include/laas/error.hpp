#pragma once

#include <stdexcept>
#include <string>

namespace laas {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed topology parameters.
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Input file or record that fails validation (name maps, traces, logs).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Request that can never fit the cloud.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Resource already owned, faulty, or otherwise unavailable.
class ConflictError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace laas
