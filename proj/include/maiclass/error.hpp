#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maiclass {

// Base of every domain error. name() is the stable identifier the CLI prints.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define MAICLASS_DEFINE_ERROR(Type)                                  \
  class Type : public Error {                                        \
   public:                                                           \
    explicit Type(const std::string& what) : Error(#Type, what) {}   \
  }

MAICLASS_DEFINE_ERROR(IoError);
MAICLASS_DEFINE_ERROR(DuplicateId);
MAICLASS_DEFINE_ERROR(EmptyCorpus);
MAICLASS_DEFINE_ERROR(NumericalFailure);
MAICLASS_DEFINE_ERROR(LineSearchFailure);
MAICLASS_DEFINE_ERROR(DimensionMismatch);
MAICLASS_DEFINE_ERROR(DegenerateLabels);
MAICLASS_DEFINE_ERROR(Unsupported);
MAICLASS_DEFINE_ERROR(ClassTooSmall);
MAICLASS_DEFINE_ERROR(LengthMismatch);
MAICLASS_DEFINE_ERROR(EmptySample);
MAICLASS_DEFINE_ERROR(EmptyTable);
MAICLASS_DEFINE_ERROR(MissingCell);
MAICLASS_DEFINE_ERROR(RangeError);
MAICLASS_DEFINE_ERROR(IncompleteRule);
MAICLASS_DEFINE_ERROR(InvalidArgument);

#undef MAICLASS_DEFINE_ERROR

// Malformed input record; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("ParseError", "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Error raised inside one evaluation run; keeps the original error name.
class RunError : public Error {
 public:
  RunError(std::size_t run, const Error& cause)
      : Error(cause.name(), "run " + std::to_string(run) + ": " + cause.what()), run_(run) {}

  std::size_t run() const noexcept { return run_; }

 private:
  std::size_t run_;
};

}  // namespace maiclass
