#pragma once

#include <stdexcept>
#include <string>

namespace govgram {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Repository or git object could not be read.
class IngestError : public Error {
 public:
  using Error::Error;
};

/// A metric was requested on an input for which it is not defined
/// (empty distribution, empty statement list).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class InferenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input record, lexicon line or config entry.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Pipeline stage failure; carries the stage name and the offending record.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string record, const std::string& what)
      : Error(stage + ": " + (record.empty() ? "" : "[" + record + "] ") + what),
        stage_(std::move(stage)),
        record_(std::move(record)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& record() const noexcept { return record_; }

 private:
  std::string stage_;
  std::string record_;
};

}  // namespace govgram
