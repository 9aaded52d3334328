#pragma once

namespace laas::cli {

/// Exit codes: 0 success, 1 usage error, 2 validation or verification failure.
int run(int argc, char** argv);

}  // namespace laas::cli
