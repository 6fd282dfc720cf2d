#pragma once

#include <stdexcept>
#include <string>

namespace vocxai {

// Base for every error the toolkit raises. Callers that only need a message
// can catch this; the subclasses let the CLI map failures to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates an operation's precondition (too short, empty, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A parameter is out of its legal range or shapes disagree.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// STFT or pipeline configuration cannot be honoured (e.g. non-COLA).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A file was readable but its contents are malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class AlignmentAmbiguous : public Error {
 public:
  using Error::Error;
};

class InvalidResult : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class ScorerUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace vocxai
