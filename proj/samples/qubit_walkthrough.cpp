// Walks through the covariances and checks for a qubit state
// D = diag(0.7, 0.3) and the observables (sigma_x, sigma_y).

#include <iostream>

#include "monometric/monometric.hpp"

int main() {
  using namespace monometric;
  const Complex i(0.0, 1.0);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.7;
  d(1, 1) = 0.3;
  ComplexMatrix sx(2, 2), sy(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, -i, i, 0.0;

  const DensityMatrix state = make_density(d);
  const ObservableTuple obs({Observable::make(sx), Observable::make(sy)});
  const FopSpec f = FopSpec::wy();

  std::cout << "Cov(sx, sx)        = " << cov(state, obs[0], obs[0]) << '\n';
  std::cout << "qCov^s_wy(sx, sx)  = " << qcov_s(state, f, obs[0], obs[0]) << '\n';
  std::cout << "qCov^as_wy(sx, sx) = " << qcov_as(state, f, obs[0], obs[0]) << '\n';

  for (const auto& r : check_hierarchy(state, f, obs))
    std::cout << r.name << ": " << r.lhs << " >= " << r.rhs << "  " << to_string(r.verdict) << '\n';

  const auto main = check_main_inequality(state, CMKernel::classical(),
                                          CMKernel::asymmetric(FopSpec::sld()), obs);
  std::cout << "main (cl, as:sld): lhs " << main.lhs << ", rhs " << main.rhs << ", remainder "
            << *main.remainder << "  " << to_string(main.verdict) << '\n';

  const auto rob = check_robertson_schrodinger(state, obs);
  std::cout << rob.name << ": " << rob.lhs << " >= " << rob.rhs << "  " << to_string(rob.verdict)
            << '\n';
}
