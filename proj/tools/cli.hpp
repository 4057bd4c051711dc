#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyclone {

// Exit codes shared by every subcommand.
enum ExitCode : int
{
    exit_ok = 0,
    exit_violation = 1, // violation found, unsat, or certificate rejected
    exit_usage = 2,
    exit_budget = 3, // budget exceeded or search gave up
};

// Seed used for sampled verdicts when --seed is absent.
inline constexpr unsigned long long default_seed = 20240601;

// args excludes the program name.
auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;

} // namespace polyclone
