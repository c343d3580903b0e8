#pragma once

#include <stdexcept>
#include <string>

namespace adview {

// Every failure the library raises derives from Error. The CLI maps the
// concrete type onto a process exit code (see tools/adview.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: unreadable files, malformed CSV rows, unparseable cells,
// invalid argument values.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EncodingError : public InputError {
 public:
  using InputError::InputError;
};

class UnknownCategoryError : public InputError {
 public:
  using InputError::InputError;
};

// Header/schema disagreement or an invalid schema document.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Model bundle problems.
class BundleError : public Error {
 public:
  using Error::Error;
};

class VersionError : public BundleError {
 public:
  using BundleError::BundleError;
};

class KindError : public BundleError {
 public:
  using BundleError::BundleError;
};

class CorruptionError : public BundleError {
 public:
  using BundleError::BundleError;
};

}  // namespace adview
