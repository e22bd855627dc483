#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace layerscatter {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// invalid argument values or inconsistent configuration
class ArgumentError : public Error {
public:
    using Error::Error;
};

// input outside the mathematical domain of an operation
class DomainError : public Error {
public:
    using Error::Error;
};

class NotInvertibleError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    NumericError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// data that cannot come from a physical medium; step is 1-based
class DataInconsistencyError : public Error {
public:
    DataInconsistencyError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace layerscatter
