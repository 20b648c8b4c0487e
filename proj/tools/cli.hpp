#pragma once

#include "newtonosc/oscint.hpp"

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace newtonosc::cli {

/// args[0] is the subcommand. Exit codes: 0 success or PASS, 1 FAIL or module failure, 2 usage error.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "one" | "const:c" | "box:a:b" | "exp:xi" | "table:x=y;x=y;...", comma-separated per
/// coordinate; a single item applies to every coordinate.
TestFunctionSpec parse_test_functions(std::string_view text, std::size_t d);

/// "geom:lo:hi:n" or a comma list; numbers may be written b^e.
std::vector<double> parse_lambda_grid(std::string_view text);

/// Largest variable index in a phase text, at least 2.
std::size_t infer_dimension(std::string_view phase);

}  // namespace newtonosc::cli
