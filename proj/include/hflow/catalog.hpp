#pragma once

// Built-in brackets with default structures. Indices are 0-based; k comes
// first, then p.

#include "hflow/structures.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hflow {

struct CatalogEntry {
  std::string name;
  std::string summary;
  LieBracket mu;
  GeometricStructure gamma;
  std::vector<std::string> flows;  // flows applicable with the default structure
};

/// The 3-form e^{147} + e^{267} + e^{357} + e^{123} + e^{156} + e^{245} - e^{346}.
inline KForm nil_g2_form() {
  KForm phi(7, 3);
  phi.add_term({0, 3, 6}, 1.0);
  phi.add_term({1, 5, 6}, 1.0);
  phi.add_term({2, 4, 6}, 1.0);
  phi.add_term({0, 1, 2}, 1.0);
  phi.add_term({0, 4, 5}, 1.0);
  phi.add_term({1, 3, 4}, 1.0);
  phi.add_term({2, 3, 5}, -1.0);
  return phi;
}

/// 7-dimensional 2-step nilpotent bracket with d e^5 = x e^{12}, d e^6 = y e^{13}.
inline LieBracket n_xy(double x, double y) {
  LieBracket mu(SplitSpace{0, 7});
  mu.set(0, 1, 4, -x);
  mu.set(0, 2, 5, -y);
  return mu;
}

inline LieBracket heisenberg3() {
  LieBracket mu(SplitSpace{0, 3});
  mu.set(0, 1, 2, 1.0);
  return mu;
}

inline LieBracket abelian(int n) {
  if (n < 1 || n > kMaxFormDim) throw ConfigError("abelian_n: n must lie in 1..12");
  return LieBracket(SplitSpace{0, n});
}

/// h3 + R with [e1, e2] = e3.
inline LieBracket heisenberg3_x_R() {
  LieBracket mu(SplitSpace{0, 4});
  mu.set(0, 1, 2, 1.0);
  return mu;
}

/// omega = e^{14} + e^{23}.
inline Matrix heisenberg3_x_R_omega() {
  Matrix W = Matrix::Zero(4, 4);
  W(0, 3) = 1.0;
  W(3, 0) = -1.0;
  W(1, 2) = 1.0;
  W(2, 1) = -1.0;
  return W;
}

/// Complex structure with J e_{2i-1} = e_{2i} on R^{2m}.
inline Matrix standard_complex_structure(int n) {
  if (n % 2 != 0) throw ConfigError("standard_complex_structure: odd dimension");
  Matrix J = Matrix::Zero(n, n);
  for (int i = 0; i < n; i += 2) {
    J(i + 1, i) = 1.0;
    J(i, i + 1) = -1.0;
  }
  return J;
}

/// Complex Heisenberg algebra as a real 6-dim algebra (bi-invariant J, so
/// the Chern-Ricci form vanishes).
inline LieBracket complex_heisenberg() {
  LieBracket mu(SplitSpace{0, 6});
  mu.set(0, 2, 4, 1.0);
  mu.set(0, 3, 5, 1.0);
  mu.set(1, 2, 5, 1.0);
  mu.set(1, 3, 4, -1.0);
  return mu;
}

/// su(2) + R with [e1,e2] = s e3 and cyclic, scaled by s.
inline LieBracket hopf_su2_R(double s = 1.0) {
  LieBracket mu(SplitSpace{0, 4});
  mu.set(0, 1, 2, s);
  mu.set(1, 2, 0, s);
  mu.set(2, 0, 1, s);
  return mu;
}

/// J e1 = e4, J e2 = e3 on su(2) + R.
inline Matrix hopf_complex_structure() {
  Matrix J = Matrix::Zero(4, 4);
  J(3, 0) = 1.0;
  J(0, 3) = -1.0;
  J(2, 1) = 1.0;
  J(1, 2) = -1.0;
  return J;
}

/// q = 1 homogeneous space: Z rotates the (e1, e2) plane of h3 + R, and e4
/// acts by the derivation s diag(1, 1, 2) on h3. Basis order Z, e1, e2, e3, e4.
inline LieBracket heisenberg3_x_R_rot(double s = 0.5) {
  LieBracket mu(SplitSpace{1, 4});
  mu.set(1, 2, 3, 1.0);
  mu.set(0, 1, 2, 1.0);
  mu.set(0, 2, 1, -1.0);
  mu.set(4, 1, 1, s);
  mu.set(4, 2, 2, s);
  mu.set(4, 3, 3, 2.0 * s);
  return mu;
}

/// The catalog with default parameters.
inline std::vector<CatalogEntry> catalog() {
  const Matrix I4 = Matrix::Identity(4, 4);
  std::vector<CatalogEntry> out;
  out.push_back({"n_xy", "7-dim nilpotent n(x,y), default x = y = 1, with its closed G2-structure", n_xy(1.0, 1.0),
                 GeometricStructure::g2(nil_g2_form()), {"laplacian_g2"}});
  out.push_back({"heisenberg3", "3-dim Heisenberg algebra, identity metric", heisenberg3(),
                 GeometricStructure::metric(Matrix::Identity(3, 3)), {"ricci_nilpotent"}});
  out.push_back({"abelian_n", "abelian R^n (n <= 12), default n = 4, identity metric", abelian(4),
                 GeometricStructure::metric(I4), {"ricci_nilpotent"}});
  out.push_back({"heisenberg3_x_R", "h3 + R with the symplectic form e^14 + e^23", heisenberg3_x_R(),
                 GeometricStructure::symplectic(heisenberg3_x_R_omega()), {}});
  out.push_back({"complex_heisenberg", "complex Heisenberg algebra, standard hermitian structure",
                 complex_heisenberg(),
                 GeometricStructure::hermitian(standard_complex_structure(6), Matrix::Identity(6, 6)),
                 {"chern_ricci", "ricci_nilpotent"}});
  out.push_back({"hopf_su2_R", "su(2) + R, default scale 0.5, hermitian structure J e1 = e4, J e2 = e3",
                 hopf_su2_R(0.5), GeometricStructure::hermitian(hopf_complex_structure(), I4), {"chern_ricci"}});
  out.push_back({"heisenberg3_x_R_rot", "q = 1 space: rotation isotropy over h3 + R, default s = 0.5",
                 heisenberg3_x_R_rot(0.5), GeometricStructure::hermitian(standard_complex_structure(4), I4),
                 {"chern_ricci"}});
  return out;
}

/// Catalog entry by name, with optional parameters: n_xy (x, y), abelian_n (n),
/// hopf_su2_R (scale), heisenberg3_x_R_rot (s).
inline CatalogEntry catalog_entry(const std::string& name, const std::vector<double>& params = {}) {
  auto param = [&](size_t i, double def) { return i < params.size() ? params[i] : def; };
  for (auto& e : catalog()) {
    if (e.name != name) continue;
    if (name == "n_xy") e.mu = n_xy(param(0, 1.0), param(1, 1.0));
    if (name == "abelian_n") {
      const int n = static_cast<int>(param(0, 4.0));
      e.mu = abelian(n);
      e.gamma = GeometricStructure::metric(Matrix::Identity(n, n));
    }
    if (name == "hopf_su2_R") e.mu = hopf_su2_R(param(0, 0.5));
    if (name == "heisenberg3_x_R_rot") e.mu = heisenberg3_x_R_rot(param(0, 0.5));
    return e;
  }
  throw ConfigError("unknown catalog algebra '" + name + "'");
}

}  // namespace hflow
