#pragma once

#include <stdexcept>

namespace unitdep {

// Malformed or inconsistent input data (corpus records, model files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace unitdep
