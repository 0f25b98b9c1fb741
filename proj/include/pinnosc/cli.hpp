#pragma once

namespace pinnosc::cli {

// Exit codes: 0 success, 1 training failure in at least one seed,
// 2 configuration or usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace pinnosc::cli
