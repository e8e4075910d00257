#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eqlat/correspondence.hpp"

namespace eqlat {

/// Malformed input. The message starts with "<source>:<line>: " when a line
/// is known.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The file could not be opened.
class ReadError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Lattices (.lat)

FiniteLattice parse_lattice(std::string_view text, std::string_view source = "<input>",
                            const Limits& limits = {});
/// Elements in id order, covers sorted by id.
std::string print_lattice(const FiniteLattice& l);

/// The value lattice named by a `lattice` line.
///
///   catalog:<kind>   a catalog lattice
///   phi:<ref>        Φ of the referenced lattice, labels "^<element>"
///   <path>           a .lat file, relative to `base_dir`
struct LatticeSource {
  std::string ref;
  LatticeRef lattice;  // the lattice whose labels the file uses
  LatticeRef base;     // for phi:, the lattice Φ is taken of; else == lattice
  bool is_phi = false;
};

LatticeSource resolve_lattice(std::string_view ref, const std::filesystem::path& base_dir,
                              const Limits& limits = {});

/// A lattice given as a `catalog:` ref, a `phi:` ref, or a .lat path.
LatticeSource load_lattice(std::string_view ref_or_path, const Limits& limits = {});

// ---------------------------------------------------------------------------
// Spaces (.ums) and structures (.eqs)

struct SpaceDoc {
  std::string name;
  LatticeSource source;
  FiniteSpace space;  // values are elements of source.lattice
};

struct StructureDoc {
  std::string name;
  LatticeSource source;
  EqStructure structure;
};

SpaceDoc parse_space(std::string_view text, std::string_view source, const std::filesystem::path& base_dir,
                     const Limits& limits = {});
StructureDoc parse_structure(std::string_view text, std::string_view source,
                             const std::filesystem::path& base_dir, const Limits& limits = {});

std::string print_space(std::string_view name, std::string_view lattice_ref, const FiniteSpace& m);
std::string print_structure(std::string_view name, std::string_view lattice_ref, const EqStructure& a);

/// Reads and parses a file; lattice refs resolve relative to its directory.
SpaceDoc load_space(const std::filesystem::path& path, const Limits& limits = {});
StructureDoc load_structure(const std::filesystem::path& path, const Limits& limits = {});

/// Φ-valued form of a space over a `phi:` source.
FilterSpace as_filter_space(const SpaceDoc& doc);
/// A Φ-valued space written over Φ materialized with labels "^<element>".
FiniteSpace as_phi_labeled(const FilterSpace& m);

// ---------------------------------------------------------------------------

/// Hasse diagram: one node n<id> per element, one edge per covering pair
/// lower -> upper, in id order.
std::string render_dot(const FiniteLattice& l);

}  // namespace eqlat
