#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "msd/pauli.hpp"
#include "msd/stabilizer_dictionary.hpp"
#include "oracles.hpp"

using namespace msd;

namespace {

DensityOperator column_as_operator(const StabilizerDictionary& dict, int j) {
  Eigen::VectorXd c = dict.dense_column(j);
  return operator_from_pauli_vector(dict.n_qubits(), c);
}

}  // namespace

TEST_CASE("dictionary counts match the closed formula and the gate orbit") {
  CHECK(stabilizer_state_count(1) == 6);
  CHECK(stabilizer_state_count(2) == 60);
  CHECK(stabilizer_state_count(3) == 1080);
  CHECK(stabilizer_state_count(4) == 36720);
  CHECK(stabilizer_state_count(5) == 2423520);

  for (int n = 1; n <= 3; ++n) {
    const auto dict = StabilizerDictionary::enumerate(n);
    CHECK(dict.column_count() ==
          static_cast<int>(stabilizer_state_count(n)));
    CHECK(dict.nonzeros_per_column() == (1 << n));
  }
  // Independent census by gate-orbit closure.
  CHECK(oracle::count_stabilizer_states_by_orbit(1) == 6);
  CHECK(oracle::count_stabilizer_states_by_orbit(2) == 60);
  CHECK(oracle::count_stabilizer_states_by_orbit(3) == 1080);
}

TEST_CASE("dictionary columns are rank-1 projector expectation vectors") {
  for (int n = 1; n <= 2; ++n) {
    const auto dict = StabilizerDictionary::enumerate(n);
    for (int j = 0; j < dict.column_count(); ++j) {
      const auto col = dict.column(j);
      CHECK(static_cast<int>(col.size()) == (1 << n));
      CHECK(col[0].pauli_index == 0);  // identity entry first (sorted)
      CHECK(col[0].sign == 1);
      const auto rho = column_as_operator(dict, j);
      const Mat m = rho.matrix();
      CHECK(std::abs(m.trace().real() - 1.0) < 1e-12);
      CHECK((m * m - m).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  // Sampled columns at n = 3.
  const auto dict3 = StabilizerDictionary::enumerate(3);
  for (int j = 0; j < dict3.column_count(); j += 97) {
    const auto rho = column_as_operator(dict3, j);
    CHECK((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("dictionary cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "msd_dict_test";
  std::filesystem::remove_all(dir);
  const auto dict = StabilizerDictionary::load_or_build(2, dir);
  const auto file = StabilizerDictionary::cache_file_name(2, dir);
  CHECK(std::filesystem::exists(file));

  const auto loaded = StabilizerDictionary::load(file);
  CHECK(loaded.n_qubits() == dict.n_qubits());
  CHECK(loaded.column_count() == dict.column_count());
  for (int j = 0; j < dict.column_count(); ++j) {
    const auto a = dict.column(j);
    const auto b = loaded.column(j);
    for (size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].pauli_index == b[k].pauli_index);
      CHECK(a[k].sign == b[k].sign);
    }
  }
  CHECK(loaded.checksum() == dict.checksum());
  CHECK(fnv1a64_file(file) == dict.checksum());

  // Documented header layout: magic, version, n, count.
  std::ifstream is(file, std::ios::binary);
  char magic[8];
  uint32_t version = 0, n = 0;
  uint64_t count = 0;
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&count), 8);
  CHECK(std::string(magic, 8) == "MSDDICT1");
  CHECK(version == StabilizerDictionary::kFormatVersion);
  CHECK(n == 2);
  CHECK(count == 60);
  const auto size = std::filesystem::file_size(file);
  CHECK(size == 24 + count * 4 * 3);

  // Corrupt header is rejected.
  {
    std::fstream f(file,
                   std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.write("XXXXXXXX", 8);
  }
  CHECK_THROWS_AS(StabilizerDictionary::load(file), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("enumeration bounds") {
  CHECK_THROWS_AS(StabilizerDictionary::enumerate(0), std::out_of_range);
  CHECK_THROWS_AS(StabilizerDictionary::enumerate(5), std::out_of_range);
}

TEST_CASE("n=5 streaming enumeration has the right cardinality") {
  // Count subspaces only (32x cheaper than streaming every signed state).
  const auto subs = enumerate_stabilizer_subspaces(5);
  CHECK(subs.size() == 75735);
  CHECK(subs.size() * 32 == stabilizer_state_count(5));
  // Spot-check one subspace: all elements hermitian, identity present.
  const auto& sub = subs[12345];
  CHECK(sub.elements.size() == 32);
  CHECK(sub.elements[0].pauli_index == 0);
  CHECK(sub.elements[0].intrinsic_neg == 0);
}
