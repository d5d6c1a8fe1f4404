#ifndef PHYLAB_CHECKPOINT_HPP
#define PHYLAB_CHECKPOINT_HPP

#include <cstdint>
#include <map>
#include <string>

#include "phylab/network.hpp"

namespace phylab {

// Sidecar metadata stored alongside the weights.
struct CheckpointInfo {
  std::string kind;  // model family tag, e.g. "ae_single"
  uint64_t seed = 0;
  std::map<std::string, double> meta;  // free-form numeric fields (n, k, ...)
};

// Writes a versioned JSON file holding every parameter block and every
// state block (batch-norm running statistics included) at full precision.
void save_checkpoint(const std::string& path, Network& net, const CheckpointInfo& info);

// Restores weights into an already-built network of the identical
// architecture. Throws std::runtime_error on version, name, or size
// mismatch, naming the offending block.
CheckpointInfo load_checkpoint(const std::string& path, Network& net);

}  // namespace phylab

#endif  // PHYLAB_CHECKPOINT_HPP
