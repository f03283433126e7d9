#pragma once

namespace genscatter::cli {

// exit codes: 0 ok, 2 config error, 3 numerical failure, 4 precondition violation
int run(int argc, char **argv);

} // namespace genscatter::cli
