#pragma once

#include <stdexcept>
#include <string>

namespace cinet {

// Every failure raised by the library carries a short machine-readable kind
// ("invalid_network", "not_decomposable", ...) next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace cinet
