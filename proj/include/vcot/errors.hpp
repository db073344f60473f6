#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vcot {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Input / configuration problems (CLI exit code 1).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

class UnknownCategoryError : public Error {
 public:
  using Error::Error;
};

class InsufficientFramesError : public Error {
 public:
  using Error::Error;
};

class KeyMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class TooFewSamplesError : public Error {
 public:
  using Error::Error;
};

// Frame extraction.
class ToolNotFoundError : public Error {
 public:
  using Error::Error;
};

class ExtractionFailedError : public Error {
 public:
  using Error::Error;
};

// Backend / transport (CLI exit code 2 when retries are exhausted).
class TransportError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class AuthError : public Error {
 public:
  using Error::Error;
};

class ImageUnsupportedError : public Error {
 public:
  using Error::Error;
};

class UnmatchedRequestError : public Error {
 public:
  using Error::Error;
};

class EmptyResponseError : public Error {
 public:
  using Error::Error;
};

// Perturbation / assembly shape mismatches.
class FrameCountMismatchError : public Error {
 public:
  using Error::Error;
};

class ChainLengthMismatchError : public Error {
 public:
  using Error::Error;
};

class KindMismatchError : public Error {
 public:
  using Error::Error;
};

class ChainShapeMismatchError : public Error {
 public:
  using Error::Error;
};

// Wraps the failure of one frame pair during chain generation. `transport`
// marks causes that mean the backend is unreachable (retries exhausted), so
// callers can stop the batch instead of failing every remaining sample.
class ChainAbortedError : public Error {
 public:
  ChainAbortedError(std::size_t pair_index, const std::string& cause, bool transport = false)
      : Error("infill pair " + std::to_string(pair_index) + ": " + cause),
        pair_index_(pair_index),
        transport_(transport) {}
  std::size_t pair_index() const { return pair_index_; }
  bool transport() const { return transport_; }

 private:
  std::size_t pair_index_;
  bool transport_;
};

}  // namespace vcot
