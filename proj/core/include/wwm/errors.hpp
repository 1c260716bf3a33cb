#ifndef WWM_ERRORS_HPP
#define WWM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wwm {

// Malformed or out-of-contract input (bad file, bad letter range, weight vector
// of the wrong arity, ...).  The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource cap (node limit, relator-count cap, ...) was hit before
// the computation finished.  The CLI maps this to exit code 3.
struct ResourceCapError : std::runtime_error {
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called outside its documented precondition (e.g. asking for
// entropy bounds of a presentation that fails verification).  CLI exit code 2.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wwm

#endif
