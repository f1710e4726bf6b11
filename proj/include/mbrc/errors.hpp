#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mbrc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data. Carries the offending file and, when
/// the problem is tied to a specific line, its 1-based line number.
class InputError : public std::runtime_error {
 public:
  InputError(std::string file, std::size_t line, const std::string& message);
  InputError(std::string file, const std::string& message) : InputError(std::move(file), 0, message) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string detail_;
};

/// Requested index target lies above what the available actions can reach.
class TargetUnreachable : public std::runtime_error {
 public:
  TargetUnreachable(double target, double max_achievable);

  double target() const noexcept { return target_; }
  double max_achievable() const noexcept { return max_achievable_; }

 private:
  double target_;
  double max_achievable_;
};

/// Inputs computed under different z or target settings were combined.
class ConfigMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mbrc
