/* Copyright 2026 The pfrlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace pfrlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector or matrix failed the probability/distortion invariants.
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

/// p(i) > 0 where the reference measure q(i) = 0.
class AbsoluteContinuityViolated : public Error {
 public:
  using Error::Error;
};

/// Information density requested at an output with zero marginal.
class UnsupportedOutput : public Error {
 public:
  using Error::Error;
};

/// Target distribution has no positive entry.
class DegenerateTarget : public Error {
 public:
  using Error::Error;
};

/// Requested distortion is outside the attainable range.
class TargetOutOfRange : public Error {
 public:
  using Error::Error;
};

class MalformedCodeword : public Error {
 public:
  using Error::Error;
};

/// A redundancy bound was requested for an eta it does not apply to.
class UnsupportedEta : public Error {
 public:
  using Error::Error;
};

/// Gray-Wyner dominance parameters requested at a zero-probability point.
class UnsupportedPoint : public Error {
 public:
  using Error::Error;
};

}  // namespace pfrlab
