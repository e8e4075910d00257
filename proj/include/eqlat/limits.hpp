#pragma once

#include <cstddef>
#include <stdexcept>

namespace eqlat {

/// Size caps for the exhaustive operations. All are plain configuration
/// values; the CLI's `--cap` overrides `max_points` and `max_amalgam_size`.
struct Limits {
  std::size_t max_lattice_elements = 4096;
  std::size_t max_boolean_atoms = 12;
  std::size_t max_boolean_example = 6;
  std::size_t max_points = 10;
  std::size_t max_amalgam_size = 4;
  std::size_t max_orbitals = 20;
};

class CapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqlat
