#include "qfci/fock.hpp"

#include <algorithm>

#include "qfci/errors.hpp"

namespace qfci {

namespace {

std::vector<Determinant> combinations(int n, int k) {
  std::vector<Determinant> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack: next larger integer with the same popcount.
  Determinant v = (Determinant{1} << k) - 1;
  const Determinant limit = Determinant{1} << n;
  while (v < limit) {
    out.push_back(v);
    const Determinant t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

std::uint64_t sector_dimension(int n_orb, Sector sector) {
  return binomial(n_orb, sector.n_alpha) * binomial(n_orb, sector.n_beta);
}

std::vector<Determinant> sector_determinants(int n_orb, Sector sector) {
  if (n_orb < 0 || 2 * n_orb > 64)
    throw InvalidArgument("orbital count out of range for 64-bit determinants");
  const auto alphas = combinations(n_orb, sector.n_alpha);
  const auto betas = combinations(n_orb, sector.n_beta);
  std::vector<Determinant> dets;
  dets.reserve(alphas.size() * betas.size());
  // beta bits are the high half, so iterating beta-major keeps the list sorted
  for (Determinant b : betas)
    for (Determinant a : alphas) dets.push_back(a | (b << n_orb));
  return dets;
}

Sector sector_of(Determinant det, int n_orb) {
  return {std::popcount(det & alpha_mask(n_orb)), std::popcount(det >> n_orb)};
}

}  // namespace qfci
