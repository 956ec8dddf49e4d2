#pragma once

#include <mcn/config.hpp>

#include <string>

namespace mcn::testing {

inline std::string config_path(const std::string& name) { return std::string(MCN_CONFIG_DIR) + "/" + name; }

inline Mcn example1() { return load_mcn_file(config_path("example1.json")); }

/// Example 1 with the plant coupling transposed, A = [[1,0],[2,3]].
inline Mcn example1_transposed() { return load_mcn_file(config_path("example1-transposed.json")); }

inline NodeRef r_node(const char* id) { return {Side::Controllability, id}; }
inline NodeRef o_node(const char* id) { return {Side::Observability, id}; }

}  // namespace mcn::testing
