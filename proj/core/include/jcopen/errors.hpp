// errors.hpp: exception hierarchy shared by all jcopen modules

#pragma once

#include <stdexcept>
#include <string>

namespace jcopen {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical parameters (RWA violated, negative rates, ...).
struct ParameterError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

// Argument outside the domain of a function, e.g. a non-positive frequency.
struct DomainError : Error {
    using Error::Error;
};

// Fock truncation too small for the requested state or evolved population.
struct TruncationError : Error {
    using Error::Error;
};

// A Bohr frequency entering the thermal occupation is not strictly positive.
struct BohrFrequencyError : Error {
    BohrFrequencyError(int rate_index, int manifold, double nu)
        : Error("Bohr frequency for gamma" + std::to_string(rate_index) + " at n=" +
                std::to_string(manifold) + " is not positive (nu=" + std::to_string(nu) +
                "); increase omega or lower n_max"),
          rate_index(rate_index), manifold(manifold), frequency(nu) {}
    int rate_index;
    int manifold;
    double frequency;
};

// Trace or Hermiticity drift of an integrated state exceeded tolerance.
struct DriftError : Error {
    using Error::Error;
};

struct DefectiveLiouvillianError : Error {
    using Error::Error;
};

struct DegenerateKernelError : Error {
    using Error::Error;
};

// State has weight outside the two lowest Fock levels.
struct SubspaceLeakError : Error {
    SubspaceLeakError(double leak)
        : Error("population outside Fock levels {0,1} is " + std::to_string(leak)),
          leak(leak) {}
    double leak;
};

// Malformed scenario configuration; `field` is the offending JSON path.
struct ConfigError : Error {
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field(std::move(field)) {}
    std::string field;
};

} // namespace jcopen
