#pragma once

namespace kpx::cli {

/// Entry point of the kpx command-line tool.  Returns the process exit code:
/// 0 success, 1 validation failures, 2 bad parameters or usage, 3 I/O
/// failure, 4 numerical failure, 5 point off the dispersion locus.
int run(int argc, char** argv);

}  // namespace kpx::cli
