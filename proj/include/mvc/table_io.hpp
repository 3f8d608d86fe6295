#pragma once

#include "mvc/allocation.hpp"

#include <string>

namespace mvc {

// Human-readable grid: one row per state, one column per version, blank
// where the version is not held.
std::string render_table_text(const AllocationTable& table);

// Header "state,version,fraction,decimal"; one row per (S, v in S).
std::string render_table_csv(const AllocationTable& table);

// {"nu":..,"c":..,"family":..,"t":..,"alpha":"p/q","entries":[{"state":[..],"alloc":{"1":"p/q"}}]}
std::string render_table_json(const AllocationTable& table);

// Inverse of render_table_json. Missing states default to all-zero entries;
// the result is validated.
AllocationTable parse_table_json(const std::string& text);
AllocationTable load_table_file(const std::string& path);

}  // namespace mvc
