#include "hflat/forms.hpp"

#include "hflat/errors.hpp"

namespace hflat {

JetForm exterior_d(const JetForm& f) {
  const int nb = f.nbasis();
  const Jet& z = f.zero();
  if (!z.valid()) throw std::logic_error("jet form without a jet space");
  if (z.order() < 1) throw JetError("exterior derivative needs jets of order >= 1");
  if (z.nvars() != nb) throw std::invalid_argument("jet variables do not match the form basis");
  JetForm out(f.dim(), f.degree() + 1, Jet(JetSpace::get(nb, z.order() - 1)));
  for (const auto& [m, c] : f.terms()) {
    for (int a = 0; a < nb; ++a) {
      const Mask bit = Mask{1} << a;
      if (m & bit) continue;
      // d(c w_I) = sum_a dc/dw_a  w_a ^ w_I
      out.add_signed(m | bit, wedge_sign(bit, m), c.derivative(a));
    }
  }
  return out;
}

}  // namespace hflat
