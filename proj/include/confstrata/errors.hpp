#pragma once

#include <stdexcept>
#include <string>

namespace confstrata {

// Malformed or out-of-contract input (bad JSON, non-injective map, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A documented size cap was exceeded.
class CapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

// A computation needed more memory or time than its budget allows.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The input does not satisfy a theorem's hypotheses, so no verdict is given.
class HypothesisRefused : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace confstrata
