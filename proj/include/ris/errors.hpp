// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ris {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// Eigensolver ran out of its sweep budget; never reported silently.
class ConvergenceFailure : public Error {
public:
  explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

class SingularMatrix : public Error {
public:
  explicit SingularMatrix(const std::string& what) : Error(what) {}
};

class NonHermitianInput : public Error {
public:
  explicit NonHermitianInput(const std::string& what) : Error(what) {}
};

// A state whose smallest eigenvalue makes log(rho) ill-defined. The offending
// eigenvalue is carried along for diagnostics; no silent regularization.
class NonFaithfulState : public Error {
public:
  NonFaithfulState(const std::string& what, double floor)
      : Error(what + " (smallest eigenvalue " + std::to_string(floor) + ")"),
        floor_(floor) {}
  double floor() const { return floor_; }

private:
  double floor_;
};

class NonTraceless : public Error {
public:
  NonTraceless(const std::string& what, double trace_mod)
      : Error(what + " (|trace| = " + std::to_string(trace_mod) + ")"),
        trace_mod_(trace_mod) {}
  double trace_mod() const { return trace_mod_; }

private:
  double trace_mod_;
};

class CptpViolation : public Error {
public:
  explicit CptpViolation(const std::string& what) : Error(what) {}
};

class ReducibleChannel : public Error {
public:
  explicit ReducibleChannel(const std::string& what) : Error(what) {}
};

// Consecutive spectral projectors moved too far for the intertwiner to exist.
class StepTooLarge : public Error {
public:
  explicit StepTooLarge(const std::string& what) : Error(what) {}
};

// Repetition-count search exhausted its cap.
class NoSuchM : public Error {
public:
  explicit NoSuchM(const std::string& what) : Error(what) {}
};

class NearDegenerateLevels : public Error {
public:
  explicit NearDegenerateLevels(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace ris
