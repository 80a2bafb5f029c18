#pragma once

#include <string>
#include <vector>

#include "symfac/system.hpp"

namespace symfac {

// Embedded systems: example1..example5 plus the isotropic and isoelastic
// tensors. Throws Error on an unknown name.
SystemSpec builtin_system(const std::string& name);

std::vector<std::string> builtin_names();
std::string builtin_description(const std::string& name);

// Input text of a builtin in the system file schema.
std::string builtin_source(const std::string& name);

}  // namespace symfac
