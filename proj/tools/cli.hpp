#pragma once

namespace ngkde_cli {

//! Full command-line entry point. Returns the process exit status:
//! 0 success, 2 usage/validation error, 3 numeric failure.
int run(int argc, const char* const* argv);

}  // namespace ngkde_cli
