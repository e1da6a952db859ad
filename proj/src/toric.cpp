#include "qecc/toric.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qecc {

std::size_t ToricCode::edge(int r, int c, Orientation o) const {
  const auto base = static_cast<std::size_t>(wrap(r) * d + wrap(c));
  return o == Orientation::Horizontal ? base : base + static_cast<std::size_t>(d) * d;
}

ToricCode build_toric(int d) {
  if (d < 2) throw std::invalid_argument("toric code needs d >= 2, got " + std::to_string(d));
  ToricCode code;
  code.d = d;
  code.n = 2 * static_cast<std::size_t>(d) * d;
  const auto H = Orientation::Horizontal;
  const auto V = Orientation::Vertical;
  code.qubit_vertices.assign(code.n, {-1, -1});
  code.qubit_plaquettes.assign(code.n, {-1, -1});
  auto attach = [](std::array<int, 2>& slot, int idx) { slot[slot[0] < 0 ? 0 : 1] = idx; };

  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const int idx = r * d + c;
      PauliString vop(code.n), pop(code.n);
      for (std::size_t q : {code.edge(r, c, H), code.edge(r, c - 1, H), code.edge(r, c, V), code.edge(r - 1, c, V)}) {
        vop.set(q, Pauli::X);
        attach(code.qubit_vertices[q], idx);
      }
      for (std::size_t q : {code.edge(r, c, H), code.edge(r + 1, c, H), code.edge(r, c, V), code.edge(r, c + 1, V)}) {
        pop.set(q, Pauli::Z);
        attach(code.qubit_plaquettes[q], idx);
      }
      code.vertex_ops.push_back(std::move(vop));
      code.plaquette_ops.push_back(std::move(pop));
    }
  }
  for (auto& l : code.x_logicals) l = PauliString(code.n);
  for (auto& l : code.z_logicals) l = PauliString(code.n);
  for (int k = 0; k < d; ++k) {
    code.z_logicals[0].set(code.edge(0, k, H), Pauli::Z);
    code.x_logicals[0].set(code.edge(k, 0, H), Pauli::X);
    code.z_logicals[1].set(code.edge(k, 0, V), Pauli::Z);
    code.x_logicals[1].set(code.edge(0, k, V), Pauli::X);
  }
  return code;
}

namespace {

DefectSet to_defects(const std::vector<std::uint8_t>& flags, int d) {
  DefectSet out;
  for (int i = 0; i < d * d; ++i)
    if (flags[i]) out.push_back({i / d, i % d});
  return out;
}

void check_size(const ToricCode& code, const PauliString& e) {
  if (e.size() != code.n)
    throw std::invalid_argument("error has " + std::to_string(e.size()) + " qubits, code has " +
                                std::to_string(code.n));
}

}  // namespace

ToricSyndrome toric_syndrome(const ToricCode& code, const PauliString& e) {
  check_size(code, e);
  const std::size_t cells = static_cast<std::size_t>(code.d) * code.d;
  std::vector<std::uint8_t> vf(cells, 0), pf(cells, 0);
  const auto& zw = e.z_words();
  const auto& xw = e.x_words();
  for (std::size_t w = 0; w < zw.size(); ++w) {
    for (std::uint64_t bits = zw[w]; bits; bits &= bits - 1) {
      const std::size_t q = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
      vf[code.qubit_vertices[q][0]] ^= 1;
      vf[code.qubit_vertices[q][1]] ^= 1;
    }
    for (std::uint64_t bits = xw[w]; bits; bits &= bits - 1) {
      const std::size_t q = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
      pf[code.qubit_plaquettes[q][0]] ^= 1;
      pf[code.qubit_plaquettes[q][1]] ^= 1;
    }
  }
  return {to_defects(vf, code.d), to_defects(pf, code.d)};
}

ToricSyndrome toric_syndrome_reference(const ToricCode& code, const PauliString& e) {
  check_size(code, e);
  const std::size_t cells = static_cast<std::size_t>(code.d) * code.d;
  std::vector<std::uint8_t> vf(cells), pf(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    vf[i] = static_cast<std::uint8_t>(symplectic_product(code.vertex_ops[i], e));
    pf[i] = static_cast<std::uint8_t>(symplectic_product(code.plaquette_ops[i], e));
  }
  return {to_defects(vf, code.d), to_defects(pf, code.d)};
}

int toric_distance(const ToricCode& code, Coord a, Coord b) {
  const int dr = std::abs(a.r - b.r), dc = std::abs(a.c - b.c);
  return std::min(dr, code.d - dr) + std::min(dc, code.d - dc);
}

WeightMatrix defect_weights(const ToricCode& code, const DefectSet& defects) {
  const std::size_t m = defects.size();
  WeightMatrix w(m, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) w[i][j] = w[j][i] = toric_distance(code, defects[i], defects[j]);
  return w;
}

namespace {

// Signed shortest step count from a to b on a cycle of length d; ties go to
// the non-wrapping direction.
int geodesic_step(int a, int b, int d) {
  const int fwd = ((b - a) % d + d) % d;
  const int back = d - fwd;
  if (fwd == 0) return 0;
  if (fwd < back) return fwd;
  if (back < fwd) return -back;
  return b > a ? fwd : -back;
}

// Row moves first, then column moves.
void add_path(const ToricCode& code, Coord a, Coord b, DefectType type, PauliString& out) {
  const int d = code.d;
  const auto H = Orientation::Horizontal;
  const auto V = Orientation::Vertical;
  const Pauli op = type == DefectType::Vertex ? Pauli::Z : Pauli::X;
  auto toggle = [&](std::size_t q) {
    if (op == Pauli::Z)
      out.flip_z(q);
    else
      out.flip_x(q);
  };
  int r = a.r, c = a.c;
  const int sr = geodesic_step(a.r, b.r, d);
  for (int k = 0; k < std::abs(sr); ++k) {
    if (sr > 0) {
      // vertex (r,c)->(r+1,c) via v(r,c); plaquette (r,c)->(r+1,c) via h(r+1,c)
      toggle(type == DefectType::Vertex ? code.edge(r, c, V) : code.edge(r + 1, c, H));
      r = code.wrap(r + 1);
    } else {
      toggle(type == DefectType::Vertex ? code.edge(r - 1, c, V) : code.edge(r, c, H));
      r = code.wrap(r - 1);
    }
  }
  const int sc = geodesic_step(a.c, b.c, d);
  for (int k = 0; k < std::abs(sc); ++k) {
    if (sc > 0) {
      // vertex (r,c)->(r,c+1) via h(r,c); plaquette (r,c)->(r,c+1) via v(r,c+1)
      toggle(type == DefectType::Vertex ? code.edge(r, c, H) : code.edge(r, c + 1, V));
      c = code.wrap(c + 1);
    } else {
      toggle(type == DefectType::Vertex ? code.edge(r, c - 1, H) : code.edge(r, c, V));
      c = code.wrap(c - 1);
    }
  }
}

}  // namespace

ToricDecoding mwpm_match(const ToricCode& code, const DefectSet& defects, DefectType type) {
  if (defects.size() % 2)
    throw std::logic_error("odd number of defects (" + std::to_string(defects.size()) + ") on the torus");
  ToricDecoding out;
  out.correction = PauliString(code.n);
  if (defects.empty()) return out;
  const auto m = min_weight_perfect_matching(defect_weights(code, defects));
  out.weight = m.weight;
  out.pairs = m.pairs;
  for (auto [i, j] : m.pairs) add_path(code, defects[i], defects[j], type, out.correction);
  return out;
}

PauliString mwpm_decode(const ToricCode& code, const DefectSet& defects, DefectType type) {
  return mwpm_match(code, defects, type).correction;
}

PauliString mwpm_decode(const ToricCode& code, const ToricSyndrome& s) {
  return mwpm_decode(code, s.vertex, DefectType::Vertex) * mwpm_decode(code, s.plaquette, DefectType::Plaquette);
}

const char* to_string(LogicalOutcome o) {
  switch (o) {
    case LogicalOutcome::Success: return "success";
    case LogicalOutcome::XFailure: return "X-failure";
    case LogicalOutcome::ZFailure: return "Z-failure";
    case LogicalOutcome::YFailure: return "Y-failure";
  }
  return "?";
}

LogicalOutcome logical_failure(const ToricCode& code, const PauliString& true_error, const PauliString& correction) {
  check_size(code, true_error);
  check_size(code, correction);
  const PauliString residual = true_error * correction;
  const auto s = toric_syndrome(code, residual);
  if (!s.vertex.empty() || !s.plaquette.empty()) throw std::logic_error("residual error has a nonzero syndrome");
  bool x_part = false, z_part = false;
  for (int i = 0; i < 2; ++i) {
    x_part |= symplectic_product(residual, code.z_logicals[i]) == 1;
    z_part |= symplectic_product(residual, code.x_logicals[i]) == 1;
  }
  if (x_part && z_part) return LogicalOutcome::YFailure;
  if (x_part) return LogicalOutcome::XFailure;
  if (z_part) return LogicalOutcome::ZFailure;
  return LogicalOutcome::Success;
}

}  // namespace qecc
