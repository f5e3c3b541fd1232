#include "rectiscan/errors.hpp"

namespace rectiscan {

void throw_invalid(const std::string& what) { throw InvalidArgument(what); }

void throw_range(const std::string& what) { throw RangeError(what); }

}  // namespace rectiscan
