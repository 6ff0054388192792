#pragma once

// Command-line front end.
//
// run() takes the argument list (without the program name) and the output
// streams, dispatches one subcommand, and returns the process exit code:
//   0  success / check passed
//   1  a verification subcommand ran and its check failed
//   2  usage error: bad flags, malformed input files, invalid geometry
//
// Subcommands: eval, grad, lift, singular, check-c1, classify,
// check-calibration, perimeter, perturb, truncate, probe-oscillation,
// mesh, figure.  All results are a single JSON document on stdout; the
// exporting commands additionally write their OBJ/CSV file.  The
// HCONE_THREADS environment variable caps the worker thread count.

#include <iosfwd>
#include <string>
#include <vector>

namespace hcone::cli {

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hcone::cli
