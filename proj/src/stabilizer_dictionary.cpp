#include "msd/stabilizer_dictionary.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "msd/pauli.hpp"

namespace msd {

namespace {

// Isotropic-subspace vectors are 2n-bit ints: low n bits x, high n bits z.
int symp(uint32_t v, uint32_t w, int n) {
  const uint32_t x1 = v & ((1u << n) - 1), z1 = v >> n;
  const uint32_t x2 = w & ((1u << n) - 1), z2 = w >> n;
  return (std::popcount(x1 & z2) + std::popcount(z1 & x2)) & 1;
}

uint16_t lex_index_of(uint32_t x, uint32_t z, int n) {
  uint32_t idx = 0;
  for (int q = 0; q < n; ++q) {
    const int xb = (x >> q) & 1, zb = (z >> q) & 1;
    const int digit = xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
    idx = idx * 4 + digit;
  }
  return static_cast<uint16_t>(idx);
}

// Phase exponent of P(x1,z1) P(x2,z2) relative to P(x1^x2, z1^z2),
// with P(x,z) = i^{|x&z|} X^x Z^z.
int product_phase_exp(uint32_t x1, uint32_t z1, uint32_t x2, uint32_t z2) {
  const int w1 = std::popcount(x1 & z1);
  const int w2 = std::popcount(x2 & z2);
  const int w12 = std::popcount((x1 ^ x2) & (z1 ^ z2));
  int k = w1 + w2 + 2 * std::popcount(z1 & x2) - w12;
  return ((k % 4) + 4) % 4;
}

void dfs_isotropic(int n, std::vector<uint32_t>& rows,
                   std::vector<int>& pivots, int start,
                   const std::function<void(const std::vector<uint32_t>&)>& sink) {
  if (static_cast<int>(rows.size()) == n) {
    sink(rows);
    return;
  }
  for (int pv = start; pv < 2 * n; ++pv) {
    // RREF: earlier rows must be zero at this pivot column.
    bool blocked = false;
    for (uint32_t r : rows) {
      if ((r >> pv) & 1u) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    std::vector<int> free_bits;
    for (int b = pv + 1; b < 2 * n; ++b) {
      if (std::find(pivots.begin(), pivots.end(), b) == pivots.end()) {
        free_bits.push_back(b);
      }
    }
    const uint32_t combos = 1u << free_bits.size();
    for (uint32_t m = 0; m < combos; ++m) {
      uint32_t r = 1u << pv;
      for (size_t j = 0; j < free_bits.size(); ++j) {
        if ((m >> j) & 1u) r |= 1u << free_bits[j];
      }
      bool ok = true;
      for (uint32_t q : rows) {
        if (symp(r, q, n)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      rows.push_back(r);
      pivots.push_back(pv);
      dfs_isotropic(n, rows, pivots, pv + 1, sink);
      rows.pop_back();
      pivots.pop_back();
    }
  }
}

StabilizerSubspace subspace_from_basis(const std::vector<uint32_t>& basis,
                                       int n) {
  const uint32_t xmask = (1u << n) - 1;
  const int group = 1 << basis.size();
  // Subset products with phase tracking; all elements commute, so the
  // accumulation order is immaterial.
  std::vector<uint32_t> ex(group), ez(group);
  std::vector<int> ek(group);
  ex[0] = ez[0] = 0;
  ek[0] = 0;
  for (size_t i = 0; i < basis.size(); ++i) {
    const uint32_t gx = basis[i] & xmask, gz = basis[i] >> n;
    const uint32_t lo = 1u << i;
    for (uint32_t m = 0; m < lo; ++m) {
      const int dk = product_phase_exp(ex[m], ez[m], gx, gz);
      ex[m | lo] = ex[m] ^ gx;
      ez[m | lo] = ez[m] ^ gz;
      ek[m | lo] = (ek[m] + dk) % 4;
    }
  }
  StabilizerSubspace out;
  out.elements.resize(group);
  for (int m = 0; m < group; ++m) {
    if (ek[m] % 2 != 0) {
      throw std::logic_error("stabilizer group element with imaginary phase");
    }
    out.elements[m] = {lex_index_of(ex[m], ez[m], n),
                       static_cast<uint8_t>(ek[m] == 2 ? 1 : 0),
                       static_cast<uint16_t>(m)};
  }
  std::sort(out.elements.begin(), out.elements.end(),
            [](const auto& a, const auto& b) {
              return a.pauli_index < b.pauli_index;
            });
  return out;
}

}  // namespace

std::vector<StabilizerSubspace> enumerate_stabilizer_subspaces(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 5) {
    throw std::out_of_range("subspace enumeration supports 1 <= n <= 5");
  }
  std::vector<StabilizerSubspace> out;
  std::vector<uint32_t> rows;
  std::vector<int> pivots;
  dfs_isotropic(n_qubits, rows, pivots, 0,
                [&](const std::vector<uint32_t>& basis) {
                  out.push_back(subspace_from_basis(basis, n_qubits));
                });
  uint64_t expect = 1;
  for (int k = 1; k <= n_qubits; ++k) expect *= (1ull << k) + 1;
  if (out.size() != expect) {
    throw std::logic_error("isotropic subspace count mismatch");
  }
  return out;
}

uint64_t stabilizer_state_count(int n_qubits) {
  uint64_t c = 1ull << n_qubits;
  for (int k = 1; k <= n_qubits; ++k) c *= (1ull << k) + 1;
  return c;
}

void for_each_stabilizer_column(
    int n_qubits,
    const std::function<void(std::span<const DictEntry>)>& visit) {
  const auto subspaces = enumerate_stabilizer_subspaces(n_qubits);
  const int group = 1 << n_qubits;
  std::vector<DictEntry> col(group);
  for (const auto& sub : subspaces) {
    for (uint32_t signs = 0; signs < static_cast<uint32_t>(group); ++signs) {
      for (int e = 0; e < group; ++e) {
        const auto& el = sub.elements[e];
        const int neg =
            el.intrinsic_neg ^ (std::popcount(el.subset & signs) & 1);
        col[e] = {el.pauli_index, static_cast<int8_t>(neg ? -1 : 1)};
      }
      visit(std::span<const DictEntry>(col.data(), col.size()));
    }
  }
}

StabilizerDictionary StabilizerDictionary::enumerate(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxEnumerationQubits) {
    throw std::out_of_range("dictionary enumeration supports 1 <= n <= 4");
  }
  StabilizerDictionary dict;
  dict.n_qubits_ = n_qubits;
  dict.nnz_ = 1 << n_qubits;
  const uint64_t expect = stabilizer_state_count(n_qubits);
  dict.entries_.reserve(expect * dict.nnz_);
  std::unordered_set<uint64_t> dedupe;
  dedupe.reserve(expect * 2);
  for_each_stabilizer_column(n_qubits, [&](std::span<const DictEntry> col) {
    uint64_t h = 1469598103934665603ull;
    for (const auto& e : col) {
      h ^= e.pauli_index;
      h *= 1099511628211ull;
      h ^= static_cast<uint8_t>(e.sign);
      h *= 1099511628211ull;
    }
    if (!dedupe.insert(h).second) {
      throw std::logic_error("duplicate stabilizer state in enumeration");
    }
    dict.entries_.insert(dict.entries_.end(), col.begin(), col.end());
  });
  dict.column_count_ = static_cast<int>(dedupe.size());
  if (dict.column_count_ != static_cast<int>(expect)) {
    throw std::logic_error("stabilizer state count mismatch");
  }
  return dict;
}

Eigen::VectorXd StabilizerDictionary::dense_column(int j) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(1 << (2 * n_qubits_));
  for (const auto& e : column(j)) v(e.pauli_index) = e.sign;
  return v;
}

// Cache layout (little endian):
//   bytes 0..7   magic "MSDDICT1"
//   bytes 8..11  uint32 format version
//   bytes 12..15 uint32 n_qubits
//   bytes 16..23 uint64 column count
//   then count * 2^n records of { uint16 pauli_index, int8 sign }.
namespace {
constexpr char kMagic[8] = {'M', 'S', 'D', 'D', 'I', 'C', 'T', '1'};
}

void StabilizerDictionary::save(const std::filesystem::path& file) const {
  std::filesystem::create_directories(file.parent_path());
  const auto tmp = file.string() + ".tmp";
  std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
  os.write(kMagic, 8);
  const uint32_t ver = kFormatVersion, n = n_qubits_;
  const uint64_t count = column_count_;
  os.write(reinterpret_cast<const char*>(&ver), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&count), 8);
  for (const auto& e : entries_) {
    os.write(reinterpret_cast<const char*>(&e.pauli_index), 2);
    os.write(reinterpret_cast<const char*>(&e.sign), 1);
  }
  os.close();
  if (!os) throw std::runtime_error("write failed for " + tmp);
  std::filesystem::rename(tmp, file);
}

StabilizerDictionary StabilizerDictionary::load(
    const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  char magic[8];
  uint32_t ver = 0, n = 0;
  uint64_t count = 0;
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&ver), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&count), 8);
  if (!is || !std::equal(magic, magic + 8, kMagic)) {
    throw std::runtime_error("bad dictionary cache header: " + file.string());
  }
  if (ver != kFormatVersion) {
    throw std::runtime_error("unsupported dictionary cache version");
  }
  if (n < 1 || n > kMaxEnumerationQubits ||
      count != stabilizer_state_count(static_cast<int>(n))) {
    throw std::runtime_error("dictionary cache header inconsistent");
  }
  StabilizerDictionary dict;
  dict.n_qubits_ = static_cast<int>(n);
  dict.nnz_ = 1 << n;
  dict.column_count_ = static_cast<int>(count);
  dict.entries_.resize(count * dict.nnz_);
  for (auto& e : dict.entries_) {
    is.read(reinterpret_cast<char*>(&e.pauli_index), 2);
    is.read(reinterpret_cast<char*>(&e.sign), 1);
  }
  if (!is) throw std::runtime_error("dictionary cache truncated");
  for (const auto& e : dict.entries_) {
    if ((e.sign != 1 && e.sign != -1) ||
        e.pauli_index >= (1u << (2 * dict.n_qubits_))) {
      throw std::runtime_error("dictionary cache corrupt");
    }
  }
  return dict;
}

std::filesystem::path StabilizerDictionary::cache_file_name(
    int n_qubits, const std::filesystem::path& dir) {
  return dir / ("stab_dict_n" + std::to_string(n_qubits) + ".bin");
}

StabilizerDictionary StabilizerDictionary::load_or_build(
    int n_qubits, const std::filesystem::path& dir) {
  const auto file = cache_file_name(n_qubits, dir);
  if (std::filesystem::exists(file)) {
    return load(file);
  }
  StabilizerDictionary dict = enumerate(n_qubits);
  dict.save(file);
  return dict;
}

uint64_t StabilizerDictionary::checksum() const {
  std::vector<uint8_t> bytes;
  bytes.reserve(entries_.size() * 3 + 24);
  auto push = [&bytes](const void* p, size_t len) {
    const auto* b = static_cast<const uint8_t*>(p);
    bytes.insert(bytes.end(), b, b + len);
  };
  push(kMagic, 8);
  const uint32_t ver = kFormatVersion, n = n_qubits_;
  const uint64_t count = column_count_;
  push(&ver, 4);
  push(&n, 4);
  push(&count, 8);
  for (const auto& e : entries_) {
    push(&e.pauli_index, 2);
    push(&e.sign, 1);
  }
  return fnv1a64(bytes);
}

uint64_t fnv1a64(std::span<const uint8_t> bytes) {
  uint64_t h = 1469598103934665603ull;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t fnv1a64_file(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (is) {
    is.read(buf, sizeof(buf));
    const auto got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<uint8_t>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace msd
