#pragma once

#include <stdexcept>
#include <string>

namespace duelsim {

// Invalid arguments to a constructor or operation (bad dimension, scale <= 0,
// violated hyperparameter ordering, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed experiment configuration. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace duelsim
