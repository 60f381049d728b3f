// geomhmm/errors.hpp

// Copyright 2026  The geomhmm authors

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

#pragma once

#include <stdexcept>
#include <string>

namespace geomhmm {

/// Iteration or sampling failure: non-convergence, unbracketed roots,
/// rejected chains. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A mixture component degenerated during fitting (vanishing weight or
/// dispersion pinned at the bracket edge).
class ComponentCollapse : public NumericalError {
 public:
  ComponentCollapse(int component, const std::string& what)
      : NumericalError(what), component_(component) {}
  int component() const { return component_; }

 private:
  int component_;
};

/// Malformed or inconsistent input files. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geomhmm
