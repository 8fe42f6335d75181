#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "msd/types.hpp"

namespace msd {

// One nonzero of a stabilizer-state Pauli-expectation column.
struct DictEntry {
  uint16_t pauli_index;  // lex index into the 4^n Pauli list
  int8_t sign;           // +1 or -1
};

// A maximal isotropic subspace of F_2^{2n} with precomputed group elements.
// elements[m] is the product of the generator subset m; columns for all 2^n
// sign assignments share this table.
struct StabilizerSubspace {
  struct Element {
    uint16_t pauli_index;
    uint8_t intrinsic_neg;  // product of unsigned generators carries (-1)
    uint16_t subset;        // generator subset mask
  };
  std::vector<Element> elements;  // 2^n entries, sorted by pauli_index
};

// Canonical enumeration (one RREF basis per subspace); count is
// prod_{k=1..n} (2^k + 1).
std::vector<StabilizerSubspace> enumerate_stabilizer_subspaces(int n_qubits);

// Streams every pure n-qubit stabilizer state exactly once as a sorted sparse
// expectation column (2^n nonzeros, entries +-1, identity entry +1).
void for_each_stabilizer_column(
    int n_qubits, const std::function<void(std::span<const DictEntry>)>& visit);

// Expected number of pure stabilizer states: 2^n prod_{k=1..n} (2^k + 1).
uint64_t stabilizer_state_count(int n_qubits);

// All pure n-qubit stabilizer states as sparse expectation columns;
// the LP constraint matrix for the robustness program.
class StabilizerDictionary {
 public:
  static constexpr int kMaxEnumerationQubits = 4;  // n=5 only via streaming
  static constexpr uint32_t kFormatVersion = 1;

  static StabilizerDictionary enumerate(int n_qubits);
  static StabilizerDictionary load(const std::filesystem::path& file);
  static StabilizerDictionary load_or_build(int n_qubits,
                                            const std::filesystem::path& dir);

  void save(const std::filesystem::path& file) const;
  static std::filesystem::path cache_file_name(
      int n_qubits, const std::filesystem::path& dir);

  int n_qubits() const { return n_qubits_; }
  int column_count() const { return column_count_; }
  int nonzeros_per_column() const { return nnz_; }
  std::span<const DictEntry> column(int j) const {
    return {entries_.data() + static_cast<size_t>(j) * nnz_,
            static_cast<size_t>(nnz_)};
  }
  Eigen::VectorXd dense_column(int j) const;

  // FNV-1a over the serialized byte layout; used for cache integrity.
  uint64_t checksum() const;

 private:
  StabilizerDictionary() = default;

  int n_qubits_ = 0;
  int column_count_ = 0;
  int nnz_ = 0;
  std::vector<DictEntry> entries_;  // column-major, fixed stride nnz_
};

uint64_t fnv1a64(std::span<const uint8_t> bytes);
uint64_t fnv1a64_file(const std::filesystem::path& file);

}  // namespace msd
