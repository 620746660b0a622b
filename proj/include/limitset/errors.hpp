#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace limitset {

// Base of everything the library throws on a contract or numeric failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold (k out of range, non-loxodromic input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Jacobi sweep cap, root-finder cap, eigenbasis conditioning.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A chamber-wall decision sits inside the configured tolerance band.
class UnresolvedAtTolerance : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace limitset
