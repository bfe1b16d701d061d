#pragma once

#include <stdexcept>
#include <string>

namespace cloudplan {

/// Malformed or inconsistent input (bad document, dangling reference,
/// negative measurement, unknown id). Front-ends map this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The request is well-formed but exceeds what the selected engine can do,
/// e.g. the exhaustive oracle on too many tables. Exit code 3.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cloudplan
