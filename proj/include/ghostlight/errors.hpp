// Copyright 2026 The ghostlight Authors
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

namespace ghostlight {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Amplitude pushed past the Fock cutoff exceeded the configured leak tolerance.
class TruncationOverflow : public Error {
  public:
    using Error::Error;
};

/// Invalid physical parameters (non-unitary beam splitter, bad mode index, ...).
class BadParams : public Error {
  public:
    using Error::Error;
};

/// Attempted to normalize (or otherwise use as a state) a zero vector.
class NullStateError : public Error {
  public:
    using Error::Error;
};

/// Both raw components of a heralded operation vanish.
class DegenerateHerald : public Error {
  public:
    using Error::Error;
};

/// Closed-form moments are undefined (r^2 + sinh^2 s = 0).
class DegenerateState : public Error {
  public:
    using Error::Error;
};

/// The SNR denominator vanishes (deterministic photon numbers).
class DegenerateStatistics : public Error {
  public:
    using Error::Error;
};

/// The interior/boundary predicate is constant over the searched range.
class NoTransition : public Error {
  public:
    using Error::Error;
};

/// Malformed user input (source descriptors, masks, ranges).
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace ghostlight
