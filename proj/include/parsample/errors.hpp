// Copyright 2026 The parsample Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace parsample {

/// The queried pinning has probability zero under the oracle's measure.
class ZeroMeasurePinning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range coordinates or symbols, or a target that is already pinned.
class MalformedQuery : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Instance parameters that violate a construction constraint.
class ParameterInfeasible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Instance file or builtin spec that cannot be parsed.
class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parsample
