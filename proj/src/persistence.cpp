#include "lenscoords/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lenscoords/errors.hpp"
#include "lenscoords/spaces.hpp"

namespace lens {

namespace {

constexpr std::uint32_t kMaxVertices = 1u << 15;

std::uint64_t simplex_key(std::span<const std::uint32_t> v) {
  std::uint64_t key = static_cast<std::uint64_t>(v.size() - 1) << 60;
  for (std::size_t i = 0; i < v.size(); ++i) key |= static_cast<std::uint64_t>(v[i]) << (45 - 15 * i);
  return key;
}

std::uint64_t edge_key(std::uint32_t j, std::uint32_t k) {
  return (static_cast<std::uint64_t>(j) << 32) | k;
}

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.diameter != b.diameter) return a.diameter < b.diameter;
  if (a.dim != b.dim) return a.dim < b.dim;
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.begin() + a.dim + 1,
                                      b.vertices.begin(), b.vertices.begin() + b.dim + 1);
}

int mod(long a, int q) {
  long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int inverse_mod(int a, int q) {
  // Fermat: a^(q-2) mod q
  long result = 1, base = a, e = q - 2;
  while (e > 0) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return static_cast<int>(result);
}

struct Entry {
  std::size_t row;
  int coeff;
};
using Column = std::vector<Entry>;

// a += factor * b, entries kept sorted by row with nonzero coefficients.
void axpy(Column& a, int factor, const Column& b, int q) {
  Column out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].row < b[j].row)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].row < a[i].row) {
      out.push_back({b[j].row, mod(static_cast<long>(factor) * b[j].coeff, q)});
      ++j;
    } else {
      const int c = mod(a[i].coeff + static_cast<long>(factor) * b[j].coeff, q);
      if (c != 0) out.push_back({a[i].row, c});
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

Column coboundary(const FilteredComplex& k, const Simplex& s, int q) {
  Column col;
  if (s.dim + 1 > k.max_dim()) return col;
  const auto verts = s.verts();
  std::array<std::uint32_t, 4> buf{};
  for (std::uint32_t w = 0; w < k.num_vertices(); ++w) {
    if (std::binary_search(verts.begin(), verts.end(), w)) continue;
    std::size_t pos = 0, out = 0;
    for (std::uint32_t v : verts) {
      if (v < w) ++pos;
    }
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (i == pos) buf[out++] = w;
      buf[out++] = verts[i];
    }
    if (pos == verts.size()) buf[out++] = w;
    const std::size_t row = k.find({buf.data(), out});
    if (row == FilteredComplex::npos) continue;
    col.push_back({row, pos % 2 == 0 ? 1 : q - 1});
  }
  std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  return col;
}

}  // namespace

FilteredComplex::FilteredComplex(std::size_t num_vertices, int max_dim, std::vector<Simplex> simplices)
    : num_vertices_(num_vertices), max_dim_(max_dim), simplices_(std::move(simplices)) {
  std::sort(simplices_.begin(), simplices_.end(), filtration_less);
  index_.reserve(simplices_.size());
  for (std::size_t i = 0; i < simplices_.size(); ++i) index_.emplace(simplex_key(simplices_[i].verts()), i);
}

std::size_t FilteredComplex::find(std::span<const std::uint32_t> vertices) const {
  auto it = index_.find(simplex_key(vertices));
  return it == index_.end() ? npos : it->second;
}

FilteredComplex build_rips(const Eigen::MatrixXd& d, int max_dim, double max_diameter) {
  if (d.rows() != d.cols()) throw Error(ErrorCode::NonSquare, "distance matrix must be square");
  if (max_dim < 1 || max_dim > 3) throw Error(ErrorCode::InvalidArgument, "max_dim must be 1, 2 or 3");
  const auto n = static_cast<std::uint32_t>(d.rows());
  if (n >= kMaxVertices) throw Error(ErrorCode::InvalidArgument, "too many vertices for a Rips complex");
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (std::uint32_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw Error(ErrorCode::InvalidArgument, "distance matrix needs a zero diagonal");
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (!(d(i, j) >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distances must be nonnegative");
      if (std::abs(d(i, j) - d(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::AsymmetricInput, "distance matrix is not symmetric");
      }
    }
  }

  std::vector<Simplex> out;
  for (std::uint32_t i = 0; i < n; ++i) out.push_back({{i}, 0, 0.0});
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (d(i, j) < max_diameter) {
        adj[i][j] = adj[j][i] = 1;
        out.push_back({{i, j}, 1, d(i, j)});
      }
    }
  }
  if (max_dim >= 2) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (!adj[i][j]) continue;
        for (std::uint32_t k = j + 1; k < n; ++k) {
          if (!adj[i][k] || !adj[j][k]) continue;
          const double tri = std::max({d(i, j), d(i, k), d(j, k)});
          out.push_back({{i, j, k}, 2, tri});
          if (max_dim < 3) continue;
          for (std::uint32_t l = k + 1; l < n; ++l) {
            if (!adj[i][l] || !adj[j][l] || !adj[k][l]) continue;
            out.push_back({{i, j, k, l}, 3, std::max({tri, d(i, l), d(j, l), d(k, l)})});
          }
        }
      }
  }
  return FilteredComplex(n, max_dim, std::move(out));
}

Cocycle::Cocycle(int q, std::vector<CocycleEdge> edges, double valid_below, double birth)
    : q_(q), edges_(std::move(edges)), valid_below_(valid_below), birth_(birth) {
  std::sort(edges_.begin(), edges_.end(), [](const CocycleEdge& a, const CocycleEdge& b) {
    return std::pair(a.j, a.k) < std::pair(b.j, b.k);
  });
  index_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    if (e.j == e.k) throw Error(ErrorCode::InvalidArgument, "cocycle edge with equal endpoints");
    if (e.j > e.k) {
      std::swap(e.j, e.k);
      e.value = -e.value;
    }
    e.value = mod(e.value, q_);
    index_.emplace(edge_key(e.j, e.k), i);
  }
}

std::optional<int> Cocycle::value(std::uint32_t j, std::uint32_t k) const {
  if (j == k) return 0;
  const bool flip = j > k;
  auto it = index_.find(flip ? edge_key(k, j) : edge_key(j, k));
  if (it == index_.end()) return std::nullopt;
  const int v = edges_[it->second].value;
  return flip ? mod(-v, q_) : v;
}

Cocycle Cocycle::add_coboundary(std::span<const int> alpha) const {
  std::vector<CocycleEdge> edges = edges_;
  for (auto& e : edges) {
    if (e.k >= alpha.size()) throw Error(ErrorCode::LengthMismatch, "0-cochain shorter than vertex set");
    e.value = mod(static_cast<long>(e.value) + alpha[e.k] - alpha[e.j], q_);
  }
  return Cocycle(q_, std::move(edges), valid_below_, birth_);
}

PersistenceResult persistent_cohomology(const FilteredComplex& complex, int q) {
  if (!is_prime(q)) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not prime");
  const auto& simplices = complex.simplices();
  PersistenceResult result;
  result.q = q;

  // dim-d simplices that are pivots of dim-(d-1) columns die there; they do
  // not start classes of their own.
  std::vector<char> killed(simplices.size(), 0);
  std::vector<std::size_t> edge_positions;
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    if (simplices[i].dim == 1) edge_positions.push_back(i);
  }
  struct Paired {
    PersistencePair pair;
    Column cocycle;
  };

  for (int dim = 0; dim < complex.max_dim(); ++dim) {
    std::unordered_map<std::size_t, std::size_t> pivot_slot;
    std::vector<Column> reduced;
    std::vector<Column> combos;  // V columns, kept for dim 1 only
    std::vector<Paired> found;
    std::vector<char> next_killed(simplices.size(), 0);

    for (std::size_t idx = simplices.size(); idx-- > 0;) {
      const Simplex& s = simplices[idx];
      if (s.dim != dim) continue;
      // Clearing: a pivot of the previous dimension reduces to zero here.
      if (killed[idx]) continue;
      Column col = coboundary(complex, s, q);
      Column combo;
      if (dim == 1) combo.push_back({idx, 1});
      while (!col.empty()) {
        auto it = pivot_slot.find(col.front().row);
        if (it == pivot_slot.end()) break;
        const Column& other = reduced[it->second];
        const int factor = mod(-static_cast<long>(col.front().coeff) * inverse_mod(other.front().coeff, q), q);
        axpy(col, factor, other, q);
        if (dim == 1) axpy(combo, factor, combos[it->second], q);
      }
      if (!col.empty()) {
        const std::size_t death_idx = col.front().row;
        next_killed[death_idx] = 1;
        pivot_slot.emplace(death_idx, reduced.size());
        const double birth = s.diameter, death = simplices[death_idx].diameter;
        if (death > birth) found.push_back({{birth, death}, dim == 1 ? combo : Column{}});
        reduced.push_back(std::move(col));
        if (dim == 1) combos.push_back(std::move(combo));
      } else {
        found.push_back({{s.diameter, kInfinity}, dim == 1 ? std::move(combo) : Column{}});
      }
    }

    std::stable_sort(found.begin(), found.end(), [](const Paired& a, const Paired& b) {
      return std::pair(a.pair.birth, a.pair.death) < std::pair(b.pair.birth, b.pair.death);
    });
    PersistenceDiagram dgm{dim, {}};
    for (auto& f : found) {
      dgm.pairs.push_back(f.pair);
      if (dim != 1) continue;
      std::vector<CocycleEdge> edges;
      std::unordered_map<std::size_t, int> coeff;
      for (const auto& e : f.cocycle) coeff.emplace(e.row, e.coeff);
      for (std::size_t i : edge_positions) {
        const Simplex& e = simplices[i];
        if (!(e.diameter < f.pair.death)) continue;
        auto it = coeff.find(i);
        edges.push_back({e.vertices[0], e.vertices[1], it == coeff.end() ? 0 : it->second});
      }
      result.cocycles.emplace_back(q, std::move(edges), f.pair.death, f.pair.birth);
    }
    result.diagrams.push_back(std::move(dgm));
    killed = std::move(next_killed);
  }
  return result;
}

std::size_t cocycle_violations(const FilteredComplex& complex, const Cocycle& eta) {
  std::size_t bad = 0;
  for (const Simplex& s : complex.simplices()) {
    if (s.dim != 2 || !(s.diameter < eta.valid_below())) continue;
    const auto jk = eta.value(s.vertices[0], s.vertices[1]);
    const auto kl = eta.value(s.vertices[1], s.vertices[2]);
    const auto jl = eta.value(s.vertices[0], s.vertices[2]);
    if (!jk || !kl || !jl || mod(static_cast<long>(*jk) + *kl - *jl, eta.q()) != 0) ++bad;
  }
  return bad;
}

SelectedClass select_class(const PersistenceDiagram& dgm) {
  if (dgm.pairs.empty()) throw Error(ErrorCode::EmptyDiagram, "diagram has no pairs");
  std::optional<SelectedClass> best;
  for (std::size_t i = 0; i < dgm.pairs.size(); ++i) {
    const auto& p = dgm.pairs[i];
    if (!(2.0 * p.birth < p.death)) continue;
    if (!best || p.persistence() > best->pair.persistence()) best = SelectedClass{p, i};
  }
  if (!best) throw Error(ErrorCode::NoAdmissibleClass, "no pair (a, b) with 2a < b");
  return *best;
}

double per_ratio(const PersistenceDiagram& dgm) {
  std::vector<double> pers;
  for (const auto& p : dgm.pairs) {
    if (p.finite()) pers.push_back(p.persistence());
  }
  if (pers.empty()) throw Error(ErrorCode::EmptyDiagram, "diagram has no finite pairs");
  if (pers.size() == 1) return kInfinity;
  std::partial_sort(pers.begin(), pers.begin() + 2, pers.end(), std::greater<>());
  return pers[0] / pers[1];
}

namespace {

nlohmann::json real_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
double null_is_infinity(const nlohmann::json& j) { return j.is_null() ? kInfinity : j.get<double>(); }

}  // namespace

nlohmann::json to_json(const PersistenceDiagram& dgm) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : dgm.pairs) pairs.push_back({p.birth, real_or_null(p.death)});
  return {{"dim", dgm.dim}, {"pairs", pairs}};
}

nlohmann::json to_json(const Cocycle& eta) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : eta.edges()) edges.push_back({e.j, e.k, e.value});
  return {{"q", eta.q()}, {"edges", edges}, {"valid_below", real_or_null(eta.valid_below())},
          {"birth", eta.birth()}};
}

nlohmann::json to_json(const PersistenceResult& r) {
  nlohmann::json dgms = nlohmann::json::array(), cocycles = nlohmann::json::array();
  for (const auto& d : r.diagrams) dgms.push_back(to_json(d));
  for (const auto& c : r.cocycles) cocycles.push_back(to_json(c));
  return {{"q", r.q}, {"diagrams", dgms}, {"cocycles", cocycles}};
}

PersistenceDiagram diagram_from_json(const nlohmann::json& j) {
  try {
    PersistenceDiagram dgm{j.at("dim").get<int>(), {}};
    for (const auto& p : j.at("pairs")) {
      PersistencePair pair{p.at(0).get<double>(), null_is_infinity(p.at(1))};
      if (!(pair.birth <= pair.death)) throw Error(ErrorCode::ParseError, "pair with birth > death");
      dgm.pairs.push_back(pair);
    }
    return dgm;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed diagram JSON: ") + e.what());
  }
}

Cocycle cocycle_from_json(const nlohmann::json& j) {
  try {
    std::vector<CocycleEdge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<int>()});
    }
    return Cocycle(j.at("q").get<int>(), std::move(edges), null_is_infinity(j.at("valid_below")),
                   j.value("birth", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed cocycle JSON: ") + e.what());
  }
}

PersistenceResult persistence_from_json(const nlohmann::json& j) {
  try {
    PersistenceResult r;
    r.q = j.at("q").get<int>();
    for (const auto& d : j.at("diagrams")) r.diagrams.push_back(diagram_from_json(d));
    for (const auto& c : j.at("cocycles")) r.cocycles.push_back(cocycle_from_json(c));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed persistence JSON: ") + e.what());
  }
}

}  // namespace lens
