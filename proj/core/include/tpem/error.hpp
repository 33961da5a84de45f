#pragma once

#include <stdexcept>
#include <string>

namespace tpem {

// Root of every error the library throws. The category is what the CLI
// turns into an exit code.
class Error : public std::runtime_error {
 public:
  enum class Category { Usage = 2, Config = 3, Data = 4, Checkpoint = 5, Numeric = 6, Internal = 1 };

  Error(Category category, const std::string& what) : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(Category::Internal, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(Category::Numeric, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Category::Config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Category::Data, what) {}
};

class CheckpointError : public Error {
 public:
  enum class Kind { BadMagic, VersionMismatch, Truncated, CorruptMask, Malformed, Missing };

  CheckpointError(Kind kind, const std::string& what) : Error(Category::Checkpoint, what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Wraps a failure raised while processing a particular task of a sequence.
class TaskError : public Error {
 public:
  TaskError(int task_index, const Error& cause)
      : Error(cause.category(), "task " + std::to_string(task_index) + ": " + cause.what()), task_index_(task_index) {}

  int task_index() const noexcept { return task_index_; }

 private:
  int task_index_;
};

}  // namespace tpem
