#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "irad/iforest.hpp"
#include "irad/model.hpp"

namespace irad {

// Self-describing training artifact: the four networks with layer shapes,
// activations and payloads, the latent dimensions and adversarial mode, the
// run seed, and optionally the fitted forest. Values round-trip bit-exactly.
struct Checkpoint {
  IradModel model;
  std::uint64_t seed = 0;
  std::optional<IsolationForest> forest;
};

std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace irad
