// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace saccade {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or container shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A NaN or Inf produced by a forward op.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters: bad patch size, budget, op tag, label range, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Metric undefined for the given inputs (e.g. AUROC with one class).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable, or malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace saccade
