#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "zkstrip/grid.hpp"

namespace zk {

/// sigma(k,l) = i (xi^3 + xi lambda_l - b xi) - delta (xi^4 + lambda_l^2),
/// stored in the slot layout of SpectralField. The odd part is dropped in the
/// Nyquist column so that the flow keeps real fields real.
class LinearSymbol {
 public:
  LinearSymbol(const StripGrid& grid, double b, double delta);

  const StripGrid& grid() const { return grid_; }
  double b() const { return b_; }
  double delta() const { return delta_; }
  cplx operator()(long k, std::size_t l) const { return table_[grid_.slot_of(k) * grid_.ny + (l - 1)]; }
  const std::vector<cplx>& table() const { return table_; }

  /// exp(sigma dt) for every slot; the last dt requested is cached.
  std::shared_ptr<const std::vector<cplx>> exponentials(double dt) const;

 private:
  StripGrid grid_;
  double b_;
  double delta_;
  std::vector<cplx> table_;
  struct Cache {
    std::mutex mu;
    double dt = -1.0;
    std::shared_ptr<const std::vector<cplx>> values;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

LinearSymbol build_symbol(const StripGrid& grid, double b, double delta);

/// phi_1(z) = (e^z - 1)/z, stable near z = 0.
cplx phi1(cplx z);

SpectralField apply_propagator(const SpectralField& s, const LinearSymbol& sym, double dt);

/// e^(sigma dt) s + phi_1(sigma dt) dt f_hat, with f_hat frozen over the step.
SpectralField duhamel_forced_step(const SpectralField& s, const LinearSymbol& sym,
                                  const SpectralField& f_hat, double dt);

}  // namespace zk
