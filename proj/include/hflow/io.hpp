#pragma once

// JSON and CSV formats. Indices in JSON are 1-based; only i < j nonzero
// structure constants are listed.

#include "hflow/dynamics.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace hflow::io {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError("matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = row[static_cast<size_t>(c)].get<double>();
  }
  return M;
}

inline json bracket_to_json(const LieBracket& mu) {
  json c = json::array();
  const int N = mu.dim();
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = 0; k < N; ++k)
        if (mu(i, j, k) != 0.0) c.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"v", mu(i, j, k)}});
  return {{"q", mu.space().q}, {"n", mu.space().n}, {"c", c}};
}

inline LieBracket bracket_from_json(const json& j) {
  try {
    const SplitSpace sp{j.at("q").get<int>(), j.at("n").get<int>()};
    LieBracket mu(sp);
    for (const auto& e : j.at("c")) {
      const int a = e.at("i").get<int>() - 1, b = e.at("j").get<int>() - 1, k = e.at("k").get<int>() - 1;
      if (a < 0 || b < 0 || k < 0 || a >= sp.dim() || b >= sp.dim() || k >= sp.dim())
        throw ConfigError("bracket index out of range");
      if (a == b) throw ConfigError("bracket entry with i == j");
      mu.set(a, b, k, e.at("v").get<double>());
    }
    return mu;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed bracket: ") + e.what());
  }
}

inline json form_to_json(const KForm& a) {
  json out = json::array();
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    if (a.coeffs()(r) == 0.0) continue;
    json idx = json::array();
    for (int i : detail::indices_of(a.mask(r))) idx.push_back(i + 1);
    out.push_back({{"idx", idx}, {"v", a.coeffs()(r)}});
  }
  return out;
}

inline KForm form_from_json(const json& j, int n, int degree) {
  KForm a(n, degree);
  try {
    for (const auto& t : j) {
      std::vector<int> idx;
      for (const auto& i : t.at("idx")) idx.push_back(i.get<int>() - 1);
      if (static_cast<int>(idx.size()) != degree) throw ConfigError("form term has the wrong degree");
      for (size_t s = 0; s < idx.size(); ++s) {
        if (idx[s] < 0 || idx[s] >= n) throw ConfigError("form index out of range");
        if (s > 0 && idx[s] <= idx[s - 1]) throw ConfigError("form indices must be strictly increasing");
      }
      a.add_term(idx, t.at("v").get<double>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed form: ") + e.what());
  }
  return a;
}

inline json structure_to_json(const GeometricStructure& g) {
  switch (g.kind()) {
    case StructureKind::metric: return {{"variant", "metric"}, {"g", matrix_to_json(g.matrix())}};
    case StructureKind::complex: return {{"variant", "complex"}, {"J", matrix_to_json(g.matrix())}};
    case StructureKind::symplectic: return {{"variant", "symplectic"}, {"omega", matrix_to_json(g.matrix())}};
    case StructureKind::hermitian:
      return {{"variant", "hermitian"}, {"J", matrix_to_json(g.complex_structure())}, {"g", matrix_to_json(g.matrix())}};
    case StructureKind::g2: return {{"variant", "g2"}, {"phi", form_to_json(g.form())}};
  }
  return {};
}

inline GeometricStructure structure_from_json(const json& j) {
  try {
    const std::string v = j.at("variant").get<std::string>();
    if (v == "metric") return GeometricStructure::metric(matrix_from_json(j.at("g")));
    if (v == "complex") return GeometricStructure::complex(matrix_from_json(j.at("J")));
    if (v == "symplectic") return GeometricStructure::symplectic(matrix_from_json(j.at("omega")));
    if (v == "hermitian") return GeometricStructure::hermitian(matrix_from_json(j.at("J")), matrix_from_json(j.at("g")));
    if (v == "g2") return GeometricStructure::g2(form_from_json(j.at("phi"), 7, 3));
    throw ConfigError("unknown structure variant '" + v + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed structure: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

inline json tensor_to_json(const Tensor& t) {
  if (const auto* m = std::get_if<Matrix>(&t)) return matrix_to_json(*m);
  return form_to_json(std::get<KForm>(t));
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

/// CSV with header t,|mu_p|,|mu_k|,normQ,terminated; the last row of an
/// early-terminated trajectory carries terminated = 1.
inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,|mu_p|,|mu_k|,normQ,terminated\n";
  const bool early = traj.reason != Termination::t_end;
  for (size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const bool last = i + 1 == traj.samples.size();
    os << format_double(s.t) << ',' << format_double(s.norm_p) << ',' << format_double(s.norm_k) << ','
       << format_double(s.normQ) << ',' << ((early && last) ? 1 : 0) << '\n';
  }
  return os.str();
}

/// One JSON object per sample: t, mu, h, Q.
inline std::string trajectory_jsonl(const Trajectory& traj) {
  std::ostringstream os;
  for (const auto& s : traj.samples) {
    json j{{"t", s.t}, {"mu", bracket_to_json(s.mu)}, {"h", matrix_to_json(s.h)}, {"Q", matrix_to_json(s.Q)}};
    os << j.dump() << '\n';
  }
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// D_p is reported by its diagonal when it is diagonal, in full otherwise.
inline json certificate_to_json(const SolitonCertificate& c) {
  const Matrix Dp = c.D_p();
  const bool diagonal = (Dp - Matrix(Dp.diagonal().asDiagonal())).norm() <= 1e-12 * std::max(1.0, Dp.norm());
  json j{{"c", c.c},
         {"residual", c.residual},
         {"derivation_residual", c.derivation_residual},
         {"is_soliton", c.is_soliton},
         {"classification", to_string(c.kind)}};
  if (diagonal) {
    json d = json::array();
    for (Eigen::Index i = 0; i < Dp.rows(); ++i) d.push_back(Dp(i, i));
    j["D_p_diagonal"] = d;
  } else {
    j["D_p"] = matrix_to_json(Dp);
  }
  return j;
}

}  // namespace hflow::io
