#pragma once

#include <stdexcept>
#include <string>

namespace ridgekit {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// The input carries no usable information (all-zero TFR, zero-norm truth, ...).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// The harmonic band constraint admits no integer bin.
class Infeasible : public Error {
public:
    Infeasible(std::size_t time_index, int harmonic, const std::string& what)
        : Error(what), time_index_(time_index), harmonic_(harmonic) {}

    std::size_t time_index() const noexcept { return time_index_; }
    int harmonic() const noexcept { return harmonic_; }

private:
    std::size_t time_index_;
    int harmonic_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ridgekit
