#pragma once

#include "aopu/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace aopu {

enum class ModelKind : std::uint32_t { Aopu = 1, Rvflnn = 2 };

std::string_view model_kind_name(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

// Binary layout, little-endian:
//   "AOPUCKPT" | u32 version | u32 kind | u64 rows | u64 cols |
//   rows·cols f64 (row-major W̃) | u64 echo length | echo bytes (JSON)
// Values are stored as raw IEEE-754 bits, so a round trip is bit-exact.
struct Checkpoint {
    ModelKind kind = ModelKind::Aopu;
    Matrix w_tilde;
    std::string config_echo;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace aopu
