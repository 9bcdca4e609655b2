#pragma once

#include <stdexcept>
#include <string>

namespace pathembed {

// Invalid arguments supplied to an operation (bad t, k, s, generator params).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or mismatched input data (files, paths, instances).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation needs at least two points (or similar minimum size).
class DegenerateInputError : public InputError {
public:
    using InputError::InputError;
};

// Unknown node/leaf/point id.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Shortest-path distance is infinite (disconnected graph).
class InfiniteDistanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Randomized generator gave up after its retry budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration or DP would exceed its configured size budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A proven-to-exist object was not found: a bug or a floating-point failure.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace pathembed
