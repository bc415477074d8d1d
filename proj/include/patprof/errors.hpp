#pragma once

#include <stdexcept>
#include <string>

namespace patprof {

// Error taxonomy, mapped to CLI exit codes:
//   UsageError / ConfigError -> 2, DataError -> 3, CapacityError -> 4.

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Learner ran out of search states (see LearnOptions::state_budget).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cached hierarchy no longer matches the dataset or atom universe.
struct StaleCacheError : DataError {
  using DataError::DataError;
};

// pattern_cost() was asked to score a pattern that does not describe the data.
struct DescribesViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace patprof
