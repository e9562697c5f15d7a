#pragma once

#include <array>
#include <concepts>
#include <memory>
#include <optional>
#include <vector>

#include "igaspec/matrix.hpp"

namespace igaspec {

/// Discrete eigenvalues in ascending order, optionally with M-orthonormal
/// eigenvectors stored as matrix columns.
template <std::floating_point T>
struct Spectrum {
  std::vector<T> eigenvalues;
  std::optional<DenseMatrix<T>> eigenvectors;
  /// Mass matrix defining the inner product the eigenvectors are normalized in
  /// (1D solves only).
  std::shared_ptr<const SymBandMatrix<T>> mass;
  /// For tensor spectra: the 1-based 1D mode indices (k, l, m) summed into each
  /// eigenvalue; unused entries are 0.
  std::vector<std::array<int, 3>> tensor_indices;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Eigenvalues of -Lap + gamma from those of -Lap when gamma is constant.
template <std::floating_point T>
Spectrum<T> shift_spectrum(Spectrum<T> spectrum, T gamma) {
  for (auto& v : spectrum.eigenvalues) v += gamma;
  return spectrum;
}

}  // namespace igaspec
