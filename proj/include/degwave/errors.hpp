#ifndef DEGWAVE_ERRORS_HPP
#define DEGWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace degwave {

// Invalid model definition or a structural hypothesis that fails to hold
// (no positive equilibrium, death law not increasing, ...).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the documented domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Caller-supplied option outside its documented range (horizons, grids, tolerances).
class ParamError : public std::runtime_error {
public:
    explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

// A solver failed to converge or an integration could not be completed.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace degwave

#endif
