#pragma once

namespace abq_tools {

/// Runs the quick example checks, printing one line per check. Returns true
/// when every check passes.
bool run_selftest();

}  // namespace abq_tools
