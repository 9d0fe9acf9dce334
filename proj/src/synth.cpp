#include "imputeval/synth.hpp"

#include <stdexcept>
#include <string>

#include "imputeval/rng.hpp"

namespace imputeval {

Dataset generate_classification(const SynthConfig& cfg) {
  if (cfg.n_features < 1) throw std::invalid_argument("generate_classification: n_features >= 1");
  if (cfg.class_sep < 0.0) throw std::invalid_argument("generate_classification: class_sep >= 0");

  FeatureSchema schema;
  for (std::size_t j = 0; j < cfg.n_features; ++j) {
    schema.entries.push_back({"f" + std::to_string(j), FeatureKind::Numeric, {}});
  }

  Dataset ds;
  ds.schema = encode_schema(schema);
  ds.values = Matrix(cfg.n_samples, cfg.n_features);
  std::vector<int> labels(cfg.n_samples, 0);

  Rng rng(cfg.seed);
  std::vector<int> vertex(cfg.n_features);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    std::size_t positive = 0;
    for (std::size_t j = 0; j < cfg.n_features; ++j) {
      vertex[j] = static_cast<int>(rng.next_u64() & 1u);
      positive += static_cast<std::size_t>(vertex[j]);
    }
    // Majority of the vertex coordinates; an even-d tie falls to the first
    // coordinate so the marginal stays exactly balanced.
    if (2 * positive > cfg.n_features) {
      labels[i] = 1;
    } else if (2 * positive < cfg.n_features) {
      labels[i] = 0;
    } else {
      labels[i] = vertex[0];
    }
    for (std::size_t j = 0; j < cfg.n_features; ++j) {
      const double center = vertex[j] ? cfg.class_sep : -cfg.class_sep;
      ds.values.at(i, j) = center + rng.normal();
    }
  }
  ds.labels = std::move(labels);
  return ds;
}

}  // namespace imputeval
