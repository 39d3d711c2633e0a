#pragma once

#include <iosfwd>

namespace qcforge {

/// Exit codes: 0 success, 1 usage error, 2 failed validation or David check.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcforge
