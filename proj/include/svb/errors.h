// include/svb/errors.h

// Copyright 2026  The svb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SVB_ERRORS_H_
#define SVB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace svb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller handed us something that violates a precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numeric routine failed (non-PD pivot, no convergence, non-finite value).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. The message carries a byte offset or line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Model file written by a different format version.
class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Optimization diverged during training.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace svb

#endif  // SVB_ERRORS_H_
