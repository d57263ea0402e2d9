// Copyright 2026 The qxsim Authors.
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

#ifndef QXSIM_COMMON_HPP_
#define QXSIM_COMMON_HPP_

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qxsim {

inline constexpr const char* kVersion = "0.1.0";

using complex_t = std::complex<double>;
using cvector_t = std::vector<complex_t>;
using rvector_t = std::vector<double>;

// Numerical policy shared by every module.
inline constexpr double kZeroThreshold = 1e-12;   // renormalization cutoff
inline constexpr double kInvariantTol = 1e-10;    // state/matrix invariants
inline constexpr double kBasisTol = 1e-9;         // orthonormality of bases

// Hard caps: all experiments fit on a desk machine.
inline constexpr std::size_t kMaxPureQubits = 12;
inline constexpr std::size_t kMaxDensityQubits = 6;

enum class Errc {
  ZeroVector,
  BadSubsystem,
  DimTooLarge,
  DimMismatch,
  BadBasis,
  OutOfRegime,
  LengthMismatch,
  NotNormalized,
  NoAmplification,
  IterationCap,
  MalformedTrace,
  ZeroDelta,
  OutOfRange,
  ZeroOverlap,
  NotAQubit,
  ZeroCapacity,
  UnknownExperiment,
  BadParam,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::BadSubsystem: return "BadSubsystem";
    case Errc::DimTooLarge: return "DimTooLarge";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::BadBasis: return "BadBasis";
    case Errc::OutOfRegime: return "OutOfRegime";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NoAmplification: return "NoAmplification";
    case Errc::IterationCap: return "IterationCap";
    case Errc::MalformedTrace: return "MalformedTrace";
    case Errc::ZeroDelta: return "ZeroDelta";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ZeroOverlap: return "ZeroOverlap";
    case Errc::NotAQubit: return "NotAQubit";
    case Errc::ZeroCapacity: return "ZeroCapacity";
    case Errc::UnknownExperiment: return "UnknownExperiment";
    case Errc::BadParam: return "BadParam";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the whole library; the code tells callers
/// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qxsim

#endif  // QXSIM_COMMON_HPP_
