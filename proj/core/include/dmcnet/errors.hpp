#pragma once

#include <stdexcept>
#include <string>

namespace dmcnet {

// Malformed or inconsistent input data (shape mismatches, bad containers).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values detected where finite numbers are required.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dmcnet
