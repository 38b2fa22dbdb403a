// Copyright 2026 The dualcons Authors
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

#ifndef DUALCONS_ERRORS_H_
#define DUALCONS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dualcons {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition or passed a bad config.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Rejection sampling ran out of attempts.
class Unsatisfiable : public Error {
 public:
  using Error::Error;
};

// The ground-truth oracle hit a tie or an unresolvable reference.
class OracleError : public Error {
 public:
  using Error::Error;
};

// A duality operation was used outside its applicability domain, or its
// answer mapping could not be resolved against the dual option list.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite scores, gradients or parameters.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed file or record on disk.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace dualcons

#endif  // DUALCONS_ERRORS_H_
