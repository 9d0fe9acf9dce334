#pragma once

#include <cstdint>

#include "imputeval/dataset.hpp"

namespace imputeval {

// Gaussian clusters at hypercube vertices with parity labels.
struct SynthConfig {
  std::size_t n_samples = 1000;
  std::size_t n_features = 25;
  double class_sep = 1.0;  // vertex coordinate magnitude, in sd units
  std::uint64_t seed = 0;
};

// Each sample is a unit-variance isotropic Gaussian around a uniformly chosen
// vertex of {-class_sep, +class_sep}^d; the label is the majority sign of the
// vertex coordinates (even-d ties fall to the first coordinate). Labels stay
// exactly balanced and every feature carries the same marginal signal, so a
// linear classifier can use all of them. Deterministic given the seed.
Dataset generate_classification(const SynthConfig& cfg);

}  // namespace imputeval
