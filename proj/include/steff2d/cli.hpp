/**
 * @file cli.hpp
 * @brief Command-line front end. Every subcommand prints one JSON document
 *        {command, inputs, result, pass, diagnostics, version}.
 *
 * Exit codes: 0 pass, 1 check evaluated but failed, 2 usage or parse error,
 * 3 numeric failure (non-convergent quadrature, domain violation).
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steff2d::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kNumeric = 3 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace steff2d::cli
