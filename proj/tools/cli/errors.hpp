#pragma once

#include <string>

#include "ancova/errors.hpp"

namespace ancova::cli {

/// A structural problem in an input file (bad field count, missing file, ...).
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A required CSV column is absent.
class MissingColumn : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A CSV cell that should be numeric is not.
class NonNumericValue : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A config file key is unknown, duplicated, malformed or missing.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace ancova::cli
