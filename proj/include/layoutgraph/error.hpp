/*
   Copyright 2026 The LayoutGraph Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#ifndef LAYOUTGRAPH_ERROR_HPP_
#define LAYOUTGRAPH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lg {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept { return "error"; }
};

// Malformed input bytes (JSON syntax, bad binary container).
class ParseError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "parse"; }
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "validation"; }
};

// Tensor operand shapes do not fit, or a non-finite value crossed an op boundary.
class ShapeError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "shape"; }
};

class NotFoundError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "not_found"; }
};

class ConflictError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "conflict"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "io"; }
};

}  // namespace lg

#endif  // LAYOUTGRAPH_ERROR_HPP_
