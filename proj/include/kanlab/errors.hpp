#pragma once

#include <stdexcept>
#include <string>

namespace kanlab {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown names, type mismatches, non-commuting diagrams.
class ContractError : public Error {
public:
  using Error::Error;
};

/// A document failed to parse or names a missing field.
class InputError : public ContractError {
public:
  using ContractError::ContractError;
};

/// An operation was called on inputs outside its documented domain.
class PreconditionError : public ContractError {
public:
  using ContractError::ContractError;
};

/// A configured size bound (truncation level, preset bound) was exceeded.
class SizeError : public Error {
public:
  using Error::Error;
};

/// A search ran out of its visit budget before completing.
class BudgetExceeded : public SizeError {
public:
  using SizeError::SizeError;
};

/// A mathematical check failed while building a derived object.
class ConstructionError : public Error {
public:
  using Error::Error;
};

} // namespace kanlab
