#pragma once

#include <mcn/model.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace mcn {

/// Parses a JSON network description (see docs/config-format.md) and checks
/// referential integrity. Throws ConfigError with a line:column locus for
/// syntax errors and a JSON pointer for field errors.
Mcn load_mcn(std::string_view document);
Mcn load_mcn_file(const std::filesystem::path& path);

/// Serializes back to the config format. load_mcn(dump_config(m)) reproduces m.
std::string dump_config(const Mcn& mcn);

}  // namespace mcn
