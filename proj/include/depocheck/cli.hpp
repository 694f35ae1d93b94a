#pragma once

#include <iosfwd>

namespace depocheck {

/// Entry point of the `depocheck` command. Exit codes: 0 success,
/// 1 validation or input errors, 2 usage errors and judge transport failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depocheck
