// Copyright 2026 The gzonoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GZONOID_ERRORS_HPP
#define GZONOID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gzonoid {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A quadrature grid or root scan is too coarse for the requested tube / field.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Internal numerical inconsistency, e.g. a boundary profile that stops
// being convex or a Gram matrix that is clearly not positive semidefinite.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Field or configuration not supported by the requested method.
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace gzonoid

#endif  // GZONOID_ERRORS_HPP
