#pragma once

#include <string>
#include <vector>

#include "uhax/util.hpp"

namespace uhax::test {

// Word literal over single-letter symbols: W("aba") = a b a.
inline Word W(const std::string& s) { return to_word(s); }

}  // namespace uhax::test
