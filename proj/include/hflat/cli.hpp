#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace hflat {

/// Exit codes: 0 every executed check passed, 1 some check failed, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a+bi" style literals separated by commas; each entry is a constant expression.
std::vector<std::complex<double>> parse_point_literal(const std::string& text);

}  // namespace hflat
