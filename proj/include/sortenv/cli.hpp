#pragma once

namespace sortenv {

/// Entry point of the `sortenv` command line tool. Returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace sortenv
