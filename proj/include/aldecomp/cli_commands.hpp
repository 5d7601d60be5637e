#pragma once

// Command-line front end.  Exit codes: 0 success, 2 invalid arguments or
// usage, 3 numeric failure, 4 file/format errors.

namespace aldecomp {

int run_cli(int argc, const char* const* argv);

}  // namespace aldecomp
