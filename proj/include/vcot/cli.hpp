#pragma once

namespace vcot {

// Entry point behind the `vcot` binary, callable in-process from tests.
// Exit codes: 0 success, 1 validation/config error, 2 backend exhaustion,
// 3 partial run (some samples failed).
int cli_main(int argc, const char* const* argv);

}  // namespace vcot
