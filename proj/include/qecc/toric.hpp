#pragma once

// d x d Kitaev toric code on a periodic lattice, MWPM decoding and logical
// failure classification.
//
// Vertices and plaquettes are both indexed by (row, col) in [0, d)^2.
// Qubits live on edges: h(r, c) joins vertex (r, c) to (r, c+1), v(r, c)
// joins (r, c) to (r+1, c). Vertex operators are X-type, plaquette operators
// are Z-type; plaquette (r, c) is the face with top-left corner (r, c).

#include <array>
#include <cstdint>
#include <vector>

#include "qecc/matching.hpp"
#include "qecc/pauli.hpp"

namespace qecc {

enum class Orientation { Horizontal, Vertical };
enum class DefectType { Vertex, Plaquette };

struct Coord {
  int r = 0;
  int c = 0;
  bool operator==(const Coord&) const = default;
};

using DefectSet = std::vector<Coord>;

struct ToricSyndrome {
  DefectSet vertex;     // flipped by Z components
  DefectSet plaquette;  // flipped by X components
};

struct ToricCode {
  int d = 0;
  std::size_t n = 0;
  std::vector<PauliString> vertex_ops;
  std::vector<PauliString> plaquette_ops;
  // pair i: x_logicals[i] anticommutes with z_logicals[i] only
  std::array<PauliString, 2> x_logicals;
  std::array<PauliString, 2> z_logicals;
  // for every qubit, the two vertices / plaquettes it touches (flat indices r*d+c)
  std::vector<std::array<int, 2>> qubit_vertices;
  std::vector<std::array<int, 2>> qubit_plaquettes;

  std::size_t edge(int r, int c, Orientation o) const;
  int wrap(int v) const { return ((v % d) + d) % d; }
};

ToricCode build_toric(int d);

/// Direct-indexed kernel: walks the set bits of e once.
ToricSyndrome toric_syndrome(const ToricCode& code, const PauliString& e);
/// Reference kernel: one symplectic product per generator.
ToricSyndrome toric_syndrome_reference(const ToricCode& code, const PauliString& e);

/// Toroidal Manhattan distance between two lattice sites.
int toric_distance(const ToricCode& code, Coord a, Coord b);
WeightMatrix defect_weights(const ToricCode& code, const DefectSet& defects);

struct ToricDecoding {
  PauliString correction;
  std::int64_t weight = 0;
  std::vector<std::pair<int, int>> pairs;  // indices into the defect list
};

/// Exact minimum-weight perfect matching of the defects, corrected along
/// geodesics. Vertex defects give a Z correction, plaquette defects an X one.
ToricDecoding mwpm_match(const ToricCode& code, const DefectSet& defects, DefectType type);
PauliString mwpm_decode(const ToricCode& code, const DefectSet& defects, DefectType type);
/// Both types decoded independently and combined.
PauliString mwpm_decode(const ToricCode& code, const ToricSyndrome& s);

enum class LogicalOutcome { Success, XFailure, ZFailure, YFailure };
const char* to_string(LogicalOutcome o);

/// Throws std::logic_error if the residual still has a syndrome.
LogicalOutcome logical_failure(const ToricCode& code, const PauliString& true_error, const PauliString& correction);

}  // namespace qecc
