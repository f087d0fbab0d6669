#ifndef SCATLAB_PARSE_HPP
#define SCATLAB_PARSE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace scatlab {

// Locale-independent text helpers shared by the spec grammars, the mask file
// format and the CLI. All parse failures throw UsageError.

std::vector<std::string> split_whitespace(std::string_view text);

double parse_double(std::string_view token, std::string_view what);
int parse_int(std::string_view token, std::string_view what);

/// 17 significant digits, `%.17g` style but independent of the C locale.
std::string format_double(double value);

/// Shortest text that parses back to the same double.
std::string format_shortest(double value);

}  // namespace scatlab

#endif  // SCATLAB_PARSE_HPP
