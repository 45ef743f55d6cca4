#pragma once

namespace rba::gateway {

/// Entry point of the `rba` tool. Returns 0 on success, 2 on usage errors and 1 on any other failure.
int cli_main(int argc, const char* const* argv);

}  // namespace rba::gateway
