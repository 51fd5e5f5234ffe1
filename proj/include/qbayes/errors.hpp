// Copyright 2026 the qbayes authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qbayes {

/// Bad argument to a library operation (dimension mismatch, out-of-range value).
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input so degenerate that no meaningful result exists (e.g. a matrix with no
/// positive eigenvalues handed to the physical-state projection).
struct degenerate_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sampler detected it cannot make progress (e.g. every burn-in proposal rejected).
struct diagnostic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration rejected; carries the path of the offending field.
class validation_error : public std::runtime_error {
 public:
  validation_error(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qbayes
