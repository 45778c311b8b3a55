#pragma once

#include "govlab/identity/identity.hpp"

#include <string>
#include <vector>

namespace testutil {

inline std::vector<govlab::identity::Identity> identities(std::size_t n, const std::string& tag = "t") {
  std::vector<govlab::identity::Identity> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(govlab::identity::identity_from_label(tag + std::to_string(i)));
  return out;
}

// Cheap fake addresses for ledger/assignment property tests.
inline std::vector<std::string> addresses(std::size_t n, const std::string& tag = "a") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("0x" + tag + std::to_string(1000000 + i));
  return out;
}

}  // namespace testutil
