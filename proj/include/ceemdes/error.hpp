#pragma once

#include <stdexcept>
#include <string>

namespace ceemdes {

// All library failures surface as this type. The message is the short,
// stable reason string ("signal too short", "empty band", ...) that the CLI
// forwards verbatim in its error JSON.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ceemdes
