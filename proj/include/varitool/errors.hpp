#pragma once

#include <stdexcept>
#include <string>

namespace varitool {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A theorem or lemma hypothesis does not hold for the supplied data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class HypothesisError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateBasisError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptyFiberError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedFamilyError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed call, e.g. an empty dictionary or a non-geometric grid.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The discretization is too coarse for the requested computation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Configuration document does not match the schema. `path` names the field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace varitool
