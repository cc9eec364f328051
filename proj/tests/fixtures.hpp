#pragma once

#include "hflat/catalog.hpp"

namespace hflat::testing {

/// Hopf surface with eps added to the dz2 coefficient of phi_1. The Bismut-flat flag is
/// kept on purpose so the flag-gated checks still run and must catch the defect.
inline HermitianModel tampered_hopf(double eps) {
  HermitianModel m = hopf_surface(1.0);
  m.name = "hopf-tampered";
  m.coframe.coefficients = [inner = m.coframe.coefficients, eps](std::span<const Jet> z) {
    auto c = inner(z);
    c[1] += cplx(eps);
    return c;
  };
  m.reference_torsion = nullptr;
  m.reference_chern_torsion_norm = nullptr;
  return m;
}

}  // namespace hflat::testing
