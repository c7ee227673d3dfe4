#pragma once

#include <filesystem>
#include <string>

#include "heatstab/feasibility.hpp"

namespace heatstab {

/// Serialized witness document: matrices as row-major nested arrays with
/// exact round-trip number formatting.
std::string witness_to_json_text(const Witness& w, int order);

/// Parses a witness document. Throws std::invalid_argument on schema errors,
/// naming the offending field.
Witness witness_from_json_text(const std::string& text, int* order_out = nullptr);

void save_witness(const std::filesystem::path& path, const Witness& w, int order);
Witness load_witness(const std::filesystem::path& path, int* order_out = nullptr);

}  // namespace heatstab
