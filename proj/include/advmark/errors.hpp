#pragma once

#include <stdexcept>
#include <string>

namespace advmark {

// Error taxonomy. Each class maps to a distinct CLI exit code (see tools/).
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace advmark
