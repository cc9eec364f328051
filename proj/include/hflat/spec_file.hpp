#pragma once

// Model-spec files: a declarative text format for a Hermitian model.
//
//   # comment
//   name = my-model            optional, defaults to the file stem
//   dim = 2
//   builtin = hopf(c=2)        a catalog model; excludes the coframe block
//   coframe:                   n rows of 2n comma-separated expressions, the
//     1, 0, 0, 0               coefficients of dz_1..dz_n, dzbar_1..dzbar_n
//     0, exp(z1), 0, 0
//   end
//   domain = 1 - conj(z1)*z1   real part > 0 marks valid points
//   sample_radius = 1          polydisc radius for seeded sampling
//   flags = chern-flat, kahler claims that unlock flag-gated checks

#include <string>
#include <string_view>

#include "hflat/catalog.hpp"

namespace hflat {

/// Throws ParseError whose message carries "source:line:column".
HermitianModel parse_model_spec(std::string_view text, const std::string& source = "<spec>");
HermitianModel load_model_spec(const std::string& path);

}  // namespace hflat
