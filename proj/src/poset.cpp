#include "attposet/poset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace attposet::poset {

namespace {

constexpr const char* kCacheFormat = "attposet-cache/1";

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
  return r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
  return r;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int k = 0; k < e; ++k) r = sat_mul(r, b);
  return r;
}

gfq::GFMatrix h_basis(const InstanceParams& params) {
  gfq::GFMatrix h(static_cast<std::size_t>(params.M), static_cast<std::size_t>(params.dim()),
                  static_cast<std::uint32_t>(params.q));
  for (int k = 0; k < params.M; ++k) h.set(static_cast<std::size_t>(k), static_cast<std::size_t>(params.N + k), 1);
  return h;
}

// All rank-i reduced echelon i×N heads paired with every i×M tail, as flat
// row-major byte strings of width N+M.
std::vector<std::vector<std::uint8_t>> grade_matrices(const InstanceParams& params, int i) {
  const int N = params.N, W = params.dim();
  const auto q = static_cast<std::uint8_t>(params.q);
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<int> piv(static_cast<std::size_t>(i));
  for (int k = 0; k < i; ++k) piv[static_cast<std::size_t>(k)] = k;
  while (true) {
    std::vector<bool> is_piv(static_cast<std::size_t>(N), false);
    for (int c : piv) is_piv[static_cast<std::size_t>(c)] = true;
    std::vector<std::size_t> free_slots;
    std::vector<std::uint8_t> base(static_cast<std::size_t>(i * W), 0);
    for (int r = 0; r < i; ++r) {
      const int pr = piv[static_cast<std::size_t>(r)];
      base[static_cast<std::size_t>(r * W + pr)] = 1;
      for (int c = pr + 1; c < W; ++c) {
        if (c < N && is_piv[static_cast<std::size_t>(c)]) continue;
        free_slots.push_back(static_cast<std::size_t>(r * W + c));
      }
    }
    std::vector<std::uint8_t> digits(free_slots.size(), 0);
    while (true) {
      std::vector<std::uint8_t> m = base;
      for (std::size_t k = 0; k < free_slots.size(); ++k) m[free_slots[k]] = digits[k];
      out.push_back(std::move(m));
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == q) digits[k++] = 0;
      if (k == digits.size()) break;
    }
    int j = i - 1;
    while (j >= 0 && piv[static_cast<std::size_t>(j)] == N - i + j) --j;
    if (j < 0) break;
    ++piv[static_cast<std::size_t>(j)];
    for (int k = j + 1; k < i; ++k) piv[static_cast<std::size_t>(k)] = piv[static_cast<std::size_t>(k - 1)] + 1;
  }
  return out;
}

SubspaceCanon from_bytes(const std::vector<std::uint8_t>& bytes, int dim, const InstanceParams& params) {
  SubspaceCanon x;
  x.dim = dim;
  x.basis = gfq::GFMatrix(static_cast<std::size_t>(dim), static_cast<std::size_t>(params.dim()),
                          static_cast<std::uint32_t>(params.q));
  for (int r = 0; r < dim; ++r) {
    auto row = x.basis.row(static_cast<std::size_t>(r));
    std::copy(bytes.begin() + r * params.dim(), bytes.begin() + (r + 1) * params.dim(), row.begin());
  }
  return x;
}

nlohmann::json grades_json(const Poset& p) {
  nlohmann::json grades = nlohmann::json::array();
  for (int i = 0; i <= p.rank(); ++i) {
    nlohmann::json g = nlohmann::json::array();
    for (const auto& x : p.grade(i)) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t r = 0; r < x.basis.rows(); ++r) {
        auto row = x.basis.row(r);
        rows.push_back(std::vector<int>(row.begin(), row.end()));
      }
      g.push_back(std::move(rows));
    }
    grades.push_back(std::move(g));
  }
  return grades;
}

std::uint32_t checksum_of(const nlohmann::json& grades) {
  const std::string text = grades.dump();
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size())));
}

}  // namespace

void InstanceParams::validate() const {
  if (q < 2 || !gfq::is_prime(static_cast<std::uint32_t>(q))) {
    throw std::invalid_argument("q = " + std::to_string(q) + " is not prime");
  }
  if (q > 255) throw std::invalid_argument("q too large");
  if (N < 1 || M < 1) throw std::invalid_argument("N and M must be positive");
}

std::string InstanceParams::label() const {
  return "(" + std::to_string(q) + "," + std::to_string(N) + "," + std::to_string(M) + ")";
}

std::uint64_t gauss(int n, int i, int q) {
  if (i < 0 || i > n) return 0;
  // Pascal-type recurrence gauss(n,i) = gauss(n-1,i-1) + q^i gauss(n-1,i).
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int k = m; k >= 1; --k) {
      row[static_cast<std::size_t>(k)] =
          sat_add(row[static_cast<std::size_t>(k - 1)], sat_mul(ipow(static_cast<std::uint64_t>(q), k), row[static_cast<std::size_t>(k)]));
    }
  }
  return row[static_cast<std::size_t>(i)];
}

std::uint64_t grade_size(const InstanceParams& p, int i) {
  return sat_mul(gauss(p.N, i, p.q), ipow(static_cast<std::uint64_t>(p.q), i * p.M));
}

std::uint64_t poset_size(const InstanceParams& p) {
  std::uint64_t total = 0;
  for (int i = 0; i <= p.N; ++i) total = sat_add(total, grade_size(p, i));
  return total;
}

std::string SubspaceCanon::key() const {
  const auto& d = basis.data();
  std::string k(1, static_cast<char>(dim));
  k.append(reinterpret_cast<const char*>(d.data()), d.size());
  return k;
}

std::optional<SubspaceCanon> canonicalize(const gfq::GFMatrix& m, int N) {
  auto r = gfq::rref(m);
  for (auto p : r.pivots) {
    if (p >= static_cast<std::size_t>(N)) return std::nullopt;
  }
  SubspaceCanon x;
  x.dim = static_cast<int>(r.rank);
  x.basis = std::move(r.reduced);
  return x;
}

Poset::Poset(InstanceParams params, std::vector<std::vector<SubspaceCanon>> grades)
    : params_(params), grades_(std::move(grades)) {
  offsets_.push_back(0);
  for (const auto& g : grades_) offsets_.push_back(offsets_.back() + g.size());
  index_.reserve(size());
  std::uint32_t idx = 0;
  for (const auto& g : grades_) {
    for (const auto& x : g) index_.emplace(x.key(), idx++);
  }
}

int Poset::grade_of(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("poset index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

const SubspaceCanon& Poset::element(std::size_t index) const {
  const int i = grade_of(index);
  return grades_[static_cast<std::size_t>(i)][index - offsets_[static_cast<std::size_t>(i)]];
}

std::optional<std::size_t> Poset::index_of(const SubspaceCanon& x) const { return index_of_key(x.key()); }

std::optional<std::size_t> Poset::index_of_key(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Poset enumerate(const InstanceParams& params, std::uint64_t cap) {
  params.validate();
  const std::uint64_t total = poset_size(params);
  if (total > cap) {
    throw ResourceError("poset " + params.label() + " has " + std::to_string(total) + " elements, above the cap of " +
                        std::to_string(cap));
  }
  std::vector<std::vector<SubspaceCanon>> grades;
  for (int i = 0; i <= params.N; ++i) {
    auto mats = grade_matrices(params, i);
    std::sort(mats.begin(), mats.end());
    std::vector<SubspaceCanon> g;
    g.reserve(mats.size());
    for (const auto& m : mats) g.push_back(from_bytes(m, i, params));
    grades.push_back(std::move(g));
  }
  return Poset(params, std::move(grades));
}

bool covers(const SubspaceCanon& x, const SubspaceCanon& y) {
  if (y.dim != x.dim + 1) return false;
  for (std::size_t r = 0; r < x.basis.rows(); ++r) {
    if (!gfq::row_space_contains(y.basis, x.basis.row(r))) return false;
  }
  return true;
}

bool in_tilde(const SubspaceCanon& x, const SubspaceCanon& y, const InstanceParams& params) {
  if (x.dim != y.dim) throw std::invalid_argument("in_tilde: grade mismatch");
  const auto sum = gfq::rref(x.basis.stacked(y.basis));
  if (static_cast<int>(sum.rank) != x.dim + 1) return false;
  const std::size_t with_h = gfq::stack_rank(sum.reduced, h_basis(params));
  const std::size_t meet = sum.rank + static_cast<std::size_t>(params.M) - with_h;
  return meet == 1;
}

std::vector<std::size_t> lower_covers(const Poset& p, std::size_t index) {
  const SubspaceCanon& y = p.element(index);
  const int d = y.dim;
  std::vector<std::size_t> out;
  if (d == 0) return out;
  const std::uint32_t q = static_cast<std::uint32_t>(p.params().q);
  const std::size_t W = static_cast<std::size_t>(p.params().dim());
  // Hyperplanes of y are kernels of nonzero functionals phi on F_q^d, taken with
  // first nonzero coordinate 1.
  std::vector<std::uint32_t> phi(static_cast<std::size_t>(d), 0);
  const std::size_t total = static_cast<std::size_t>(ipow(q, d));
  for (std::size_t code = 1; code < total; ++code) {
    std::size_t c = code;
    for (auto& v : phi) {
      v = static_cast<std::uint32_t>(c % q);
      c /= q;
    }
    std::size_t lead = 0;
    while (phi[lead] == 0) ++lead;
    if (phi[lead] != 1) continue;
    gfq::GFMatrix sub(static_cast<std::size_t>(d - 1), W, q);
    std::size_t r = 0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
      if (j == lead) continue;
      // Kernel vector e_j - phi_j e_lead.
      const std::uint32_t neg = (q - phi[j]) % q;
      for (std::size_t col = 0; col < W; ++col) {
        sub.set(r, col, y.basis.at(j, col) + neg * y.basis.at(lead, col));
      }
      ++r;
    }
    auto canon = canonicalize(sub, p.params().N);
    auto idx = p.index_of(*canon);
    if (!idx) throw std::logic_error("hyperplane missing from poset index");
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> tilde_neighbors(const Poset& p, std::size_t index) {
  const SubspaceCanon& x = p.element(index);
  const int i = x.dim;
  const int N = p.params().N, M = p.params().M;
  const std::uint32_t q = static_cast<std::uint32_t>(p.params().q);
  std::vector<std::size_t> out;
  if (i == 0) return out;
  const std::size_t nu = static_cast<std::size_t>(ipow(q, M));
  const std::size_t nc = static_cast<std::size_t>(ipow(q, i));
  std::vector<std::uint32_t> u(static_cast<std::size_t>(M)), coef(static_cast<std::size_t>(i));
  for (std::size_t ucode = 1; ucode < nu; ++ucode) {
    std::size_t t = ucode;
    for (auto& v : u) {
      v = static_cast<std::uint32_t>(t % q);
      t /= q;
    }
    std::size_t lead = 0;
    while (u[lead] == 0) ++lead;
    if (u[lead] != 1) continue;
    for (std::size_t ccode = 1; ccode < nc; ++ccode) {
      std::size_t s = ccode;
      for (auto& v : coef) {
        v = static_cast<std::uint32_t>(s % q);
        s /= q;
      }
      // Rows x_j + c_j u only change the tail, so the result stays reduced.
      SubspaceCanon y = x;
      for (int r = 0; r < i; ++r) {
        const std::uint32_t c = coef[static_cast<std::size_t>(r)];
        if (c == 0) continue;
        for (int k = 0; k < M; ++k) {
          const auto col = static_cast<std::size_t>(N + k);
          y.basis.set(static_cast<std::size_t>(r), col, y.basis.at(static_cast<std::size_t>(r), col) + c * u[static_cast<std::size_t>(k)]);
        }
      }
      auto idx = p.index_of(y);
      if (!idx) throw std::logic_error("tilde neighbour missing from poset index");
      out.push_back(*idx);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void save_cache(const Poset& p, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["format"] = kCacheFormat;
  doc["q"] = p.params().q;
  doc["N"] = p.params().N;
  doc["M"] = p.params().M;
  nlohmann::json grades = grades_json(p);
  doc["checksum"] = checksum_of(grades);
  doc["grades"] = std::move(grades);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CacheError(CacheError::Kind::Io, "cannot write cache " + path.string());
  out << doc.dump();
  if (!out) throw CacheError(CacheError::Kind::Io, "write failed for cache " + path.string());
}

Poset load_cache(const std::filesystem::path& path) {
  using Kind = CacheError::Kind;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError(Kind::Io, "cannot read cache " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw CacheError(Kind::Malformed, "malformed cache " + path.string() + ": " + e.what());
  }
  auto malformed = [&](const std::string& why) { return CacheError(Kind::Malformed, "malformed cache " + path.string() + ": " + why); };
  if (!doc.is_object()) throw malformed("not an object");
  if (!doc.contains("format") || !doc["format"].is_string()) throw malformed("missing format");
  if (doc["format"] != kCacheFormat) {
    throw CacheError(Kind::Version, "unsupported cache format '" + doc["format"].get<std::string>() + "'");
  }
  for (const char* f : {"q", "N", "M", "checksum"}) {
    if (!doc.contains(f) || !doc[f].is_number_integer()) throw malformed(std::string("missing integer field ") + f);
  }
  InstanceParams params{doc["q"].get<int>(), doc["N"].get<int>(), doc["M"].get<int>()};
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw CacheError(Kind::Param, std::string("invalid parameters in cache: ") + e.what());
  }
  if (!doc.contains("grades") || !doc["grades"].is_array()) throw malformed("missing grades");
  const auto& grades = doc["grades"];
  if (grades.size() != static_cast<std::size_t>(params.N) + 1) {
    throw CacheError(Kind::Param, "cache has " + std::to_string(grades.size()) + " grades, expected N+1 = " +
                                      std::to_string(params.N + 1));
  }
  std::vector<std::vector<SubspaceCanon>> out;
  for (int i = 0; i <= params.N; ++i) {
    const auto& g = grades[static_cast<std::size_t>(i)];
    if (!g.is_array()) throw malformed("grade " + std::to_string(i) + " is not an array");
    if (g.size() != grade_size(params, i)) {
      throw CacheError(Kind::Param, "grade " + std::to_string(i) + " has " + std::to_string(g.size()) +
                                        " elements, expected " + std::to_string(grade_size(params, i)) + " for " +
                                        params.label());
    }
    std::vector<SubspaceCanon> elems;
    elems.reserve(g.size());
    for (const auto& rows : g) {
      if (!rows.is_array() || rows.size() != static_cast<std::size_t>(i)) throw malformed("bad element in grade " + std::to_string(i));
      std::vector<std::uint8_t> bytes;
      for (const auto& row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(params.dim())) throw malformed("bad row width");
        for (const auto& v : row) {
          if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= params.q) throw malformed("entry out of field");
          bytes.push_back(static_cast<std::uint8_t>(v.get<int>()));
        }
      }
      SubspaceCanon x = from_bytes(bytes, i, params);
      auto canon = canonicalize(x.basis, params.N);
      if (!canon || !(*canon == x)) throw malformed("element is not a canonical member of P");
      elems.push_back(std::move(x));
    }
    out.push_back(std::move(elems));
  }
  if (checksum_of(grades) != doc["checksum"].get<std::uint32_t>()) {
    throw CacheError(Kind::Checksum, "checksum mismatch in cache " + path.string());
  }
  return Poset(params, std::move(out));
}

std::filesystem::path default_cache_path(const InstanceParams& params) {
  const char* env = std::getenv("ATTPOSET_CACHE_DIR");
  std::filesystem::path dir = env && *env ? std::filesystem::path(env) : std::filesystem::path(".attposet-cache");
  return dir / ("A_q" + std::to_string(params.q) + "_N" + std::to_string(params.N) + "_M" + std::to_string(params.M) + ".json");
}

Poset load_or_enumerate(const InstanceParams& params, const std::filesystem::path& path, std::uint64_t cap) {
  if (std::filesystem::exists(path)) {
    Poset p = load_cache(path);
    if (!(p.params() == params)) {
      throw CacheError(CacheError::Kind::Param, "cache " + path.string() + " holds " + p.params().label() +
                                                    ", requested " + params.label());
    }
    return p;
  }
  Poset p = enumerate(params, cap);
  save_cache(p, path);
  return p;
}

}  // namespace attposet::poset
