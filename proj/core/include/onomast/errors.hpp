#pragma once

#include <stdexcept>
#include <string>

namespace onomast {

// Unreadable or unwritable file, failed decompression.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file does not follow its documented format (missing column, bad header).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A second read of the same input did not see the same bytes.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace onomast
