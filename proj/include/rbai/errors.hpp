#pragma once

#include <stdexcept>
#include <string>

namespace rbai {

// Gram/design matrix is numerically singular (smallest eigenvalue below the
// relative floor), so A^{-1} quantities are undefined.
struct SingularDesign : std::runtime_error {
  explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

// The difference-vector set does not span R^d.
struct NonSpanning : std::runtime_error {
  explicit NonSpanning(const std::string& what) : std::runtime_error(what) {}
};

// A rounding budget n below the apportionment floor r(eps) = ceil(2p/eps).
struct InsufficientBudget : std::runtime_error {
  explicit InsufficientBudget(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rbai
