#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Invalid argument, malformed configuration or dimension mismatch.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two settings that must agree do not (e.g. gamma vs tau_e/tau_c).
class ConflictError : public InputError {
 public:
  using InputError::InputError;
};

/// A requested dimension exceeds the configured maximum.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The eigensolver hit its sweep cap before the off-diagonal norm vanished.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A density matrix has an eigenvalue well below zero.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Failure inside a single Monte Carlo run; carries the run index.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, std::size_t run_index)
      : std::runtime_error(what), run_index_(run_index) {}
  std::size_t run_index() const noexcept { return run_index_; }

 private:
  std::size_t run_index_;
};

}  // namespace qwalk
