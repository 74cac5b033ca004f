#ifndef RDLOC_ERROR_HPP
#define RDLOC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rdloc {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Numeric,
  Regression,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace rdloc

#endif
