#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfd {

enum class ErrorKind {
  DisjointOrNested,
  NoTriplePoint,
  DegenerateFrame,
  SignUndetermined,
  TangentialContact,
  OutOfRange,
  DegenerateState,
  UnrecognizedEvent,
  CrossedDegeneracy,
  TopologyChange,
  ParseError,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<int> involved = {})
      : std::runtime_error(what), kind_(kind), involved_(std::move(involved)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Ball indices implicated in the failure, if known.
  const std::vector<int>& involved() const noexcept { return involved_; }

 private:
  ErrorKind kind_;
  std::vector<int> involved_;
};

template <ErrorKind K>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& what, std::vector<int> involved = {})
      : Error(K, what, std::move(involved)) {}
};

using DisjointOrNested = TypedError<ErrorKind::DisjointOrNested>;
using NoTriplePoint = TypedError<ErrorKind::NoTriplePoint>;
using DegenerateFrame = TypedError<ErrorKind::DegenerateFrame>;
using SignUndetermined = TypedError<ErrorKind::SignUndetermined>;
using TangentialContact = TypedError<ErrorKind::TangentialContact>;
using OutOfRange = TypedError<ErrorKind::OutOfRange>;
using DegenerateState = TypedError<ErrorKind::DegenerateState>;
using UnrecognizedEvent = TypedError<ErrorKind::UnrecognizedEvent>;
using CrossedDegeneracy = TypedError<ErrorKind::CrossedDegeneracy>;
using TopologyChange = TypedError<ErrorKind::TopologyChange>;
using InvalidInput = TypedError<ErrorKind::InvalidInput>;

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(ErrorKind::ParseError, what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace sfd
