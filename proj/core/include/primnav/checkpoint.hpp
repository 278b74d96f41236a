#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "primnav/dqn.hpp"
#include "primnav/nn.hpp"

namespace primnav {

struct Checkpoint {
    QNetwork network;
    std::optional<AdamState> adam;
    std::map<std::string, std::string> metadata;
};

/// Binary format: magic "PRIMNAV-DQN", format version u32, architecture
/// fingerprint (layer shape list), little-endian 64-bit parameter blob,
/// optional Adam state blob. Round-trips bit-exactly.
std::vector<std::uint8_t> save_checkpoint(const QNetwork& network,
                                          const AdamState* adam = nullptr,
                                          const std::map<std::string, std::string>& metadata = {});

/// Throws std::runtime_error on truncation, bad magic/version, or an
/// architecture fingerprint mismatch.
Checkpoint load_checkpoint(const std::vector<std::uint8_t>& bytes);

void write_checkpoint_file(const std::string& path, const QNetwork& network,
                           const AdamState* adam = nullptr,
                           const std::map<std::string, std::string>& metadata = {});
Checkpoint read_checkpoint_file(const std::string& path);

}  // namespace primnav
