#pragma once

#include <stdexcept>
#include <string>

namespace phishurl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// url ingestion
struct EmptyUrl : Error {
  EmptyUrl() : Error("url is empty after trimming") {}
};

// dataset loading
struct FileNotFound : Error {
  explicit FileNotFound(const std::string& path) : Error("file not found: " + path) {}
};
struct MissingColumn : Error {
  explicit MissingColumn(const std::string& column) : Error("missing column: " + column) {}
};
struct EmptyDataset : Error {
  using Error::Error;
};
struct InsufficientMajority : Error {
  using Error::Error;
};
struct TooFewRows : Error {
  using Error::Error;
};

// classifiers
struct InvalidHyperparameter : Error {
  using Error::Error;
};
struct SingleClassTraining : Error {
  SingleClassTraining() : Error("training set contains a single class") {}
};
struct NonFiniteFeature : Error {
  using Error::Error;
};
struct SchemaMismatch : Error {
  using Error::Error;
};
struct UnsupportedAlgorithm : Error {
  using Error::Error;
};

// evaluation
struct LengthMismatch : Error {
  using Error::Error;
};
struct EmptyInput : Error {
  using Error::Error;
};

// experiments
struct InvalidConfig : Error {
  using Error::Error;
};
struct MissingPair : Error {
  using Error::Error;
};

}  // namespace phishurl
