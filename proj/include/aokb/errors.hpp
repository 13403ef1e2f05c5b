#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aokb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidField : public Error {
 public:
  using Error::Error;
};

class NoSuchPrime : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidModule : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class UndefinedValuation : public Error {
 public:
  using Error::Error;
};

class ImaxTooSmall : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when an enumeration would visit more candidates than allowed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t budget, std::vector<std::int64_t> box)
      : Error(make_message(budget, box)), budget_(budget), box_(std::move(box)) {}

  std::uint64_t budget() const { return budget_; }
  /// Per-coordinate half-widths of the box that was being scanned.
  const std::vector<std::int64_t>& box() const { return box_; }

 private:
  static std::string make_message(std::uint64_t budget, const std::vector<std::int64_t>& box) {
    std::string s = "enumeration budget of " + std::to_string(budget) + " candidates exceeded; box half-widths [";
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(box[i]);
    }
    return s + "]";
  }
  std::uint64_t budget_;
  std::vector<std::int64_t> box_;
};

}  // namespace aokb
