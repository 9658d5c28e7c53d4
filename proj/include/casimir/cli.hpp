#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace casimir::cli {

/// Bad command line input. Maps to exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// "200nm", "1.5um", "1e-6m" -> meters. Requires a unit.
double parse_length(std::string_view text);
/// "300K" or "300" -> kelvin.
double parse_temperature(std::string_view text);
/// "9.0eV", "35meV", "1.3e16rad/s" -> rad/s.
double parse_frequency(std::string_view text);
/// "50nm:3um:log:60" (start:stop:lin|log:count) or a comma list "50nm,100nm".
std::vector<double> parse_gaps(std::string_view text);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
