#pragma once

#include <stdexcept>
#include <string>

namespace dpeval {

/// Malformed or invalid input data (CSV files, score files, corpus filters).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model could not produce a ranking for a release.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dpeval
