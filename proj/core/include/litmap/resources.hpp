#pragma once

#include <string_view>

namespace litmap::resources {

// Data files compiled into the library (stop words, lemma table, prompts).
// Returns an empty view for unknown names.
std::string_view get(std::string_view name);

}  // namespace litmap::resources
