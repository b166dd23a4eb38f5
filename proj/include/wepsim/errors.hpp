#ifndef WEPSIM_ERRORS_HPP
#define WEPSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wepsim {

// Error classes map one-to-one onto the CLI exit codes: configuration
// problems (bad config file, bad flags, unresolvable species selectors),
// data problems (malformed CSV/budget files, schema mismatches), and
// numerical failures (degenerate fits, branch ambiguity).

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fewer than five points, collinear input, or a singular scatter system.
class DegenerateInput : public NumericalError {
public:
  explicit DegenerateInput(const std::string& msg) : NumericalError(msg) {}
};

// Fitted and predicted differential phase disagree by more than pi/2,
// so the 2*pi*m +/- phi branch cannot be lifted reliably.
class BranchAmbiguityError : public NumericalError {
public:
  explicit BranchAmbiguityError(const std::string& msg) : NumericalError(msg) {}
};

class MissingRawError : public DataError {
public:
  explicit MissingRawError(const std::string& msg) : DataError(msg) {}
};

class DuplicateRawError : public DataError {
public:
  explicit DuplicateRawError(const std::string& msg) : DataError(msg) {}
};

class UnknownStateError : public DataError {
public:
  explicit UnknownStateError(const std::string& msg) : DataError(msg) {}
};

enum class ExitCode : int {
  ok = 0,
  internal = 1,
  config = 2,
  data = 3,
  numerical = 4,
};

}  // namespace wepsim

#endif  // WEPSIM_ERRORS_HPP
