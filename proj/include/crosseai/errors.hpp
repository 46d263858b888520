#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crosseai {

// Invalid argument value (out-of-range weight, zero-norm vector, bad length).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two inputs that must share a shape do not.
class DimensionMismatch : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// The thresholded map has no foreground, so no box can be produced.
class NoLocalizableRegion : public std::runtime_error {
public:
    NoLocalizableRegion() : std::runtime_error("no localizable region") {}
};

// A map or record file violates the accepted format.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoPositiveSample : public std::runtime_error {
public:
    explicit NoPositiveSample(const std::string& query)
        : std::runtime_error("no positive sample for image '" + query + "'") {}
};

class InsufficientNegatives : public std::runtime_error {
public:
    InsufficientNegatives(std::size_t requested, std::size_t available)
        : std::runtime_error("insufficient negatives: requested " + std::to_string(requested) +
                             ", available " + std::to_string(available)),
          requested_(requested),
          available_(available) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t requested_;
    std::size_t available_;
};

}  // namespace crosseai
