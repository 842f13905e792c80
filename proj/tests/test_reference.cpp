#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vcc/driver.hpp"
#include "vcc/linalg.hpp"
#include "vcc/reference.hpp"

using namespace vcc;

namespace {

const std::vector<ReferenceRow>& refs() {
  static const auto rows = read_references(oracle::data_path("references.csv"));
  return rows;
}

}  // namespace

TEST(Reference, MatchesGeneratorCsvOnEveryFixture) {
  int checked = 0;
  for (const auto& row : refs()) {
    const IntegralSet set = read_fcidump(fixture_path(VCC_TEST_DATA_DIR, row.system, row.r).string());
    EXPECT_NEAR(hf_energy(set), row.e_hf, 1e-8) << row.system << ' ' << row.r;
    EXPECT_NEAR(fci_energy(set), row.e_fci, 1e-8) << row.system << ' ' << row.r;
    EXPECT_NEAR(cisd_energy(set), row.e_cisd, 1e-7) << row.system << ' ' << row.r;
    ++checked;
  }
  EXPECT_EQ(checked, 38);
}

TEST(Reference, VariationalOrdering) {
  const IntegralSet set = read_fcidump(oracle::data_path("h4_1.00.fcidump"));
  const double hf = hf_energy(set), ci = cisd_energy(set), fci = fci_energy(set);
  EXPECT_LE(fci, ci);
  EXPECT_LE(ci, hf);
  const IntegralSet h2 = read_fcidump(oracle::data_path("h2_0.74.fcidump"));
  EXPECT_NEAR(cisd_energy(h2), fci_energy(h2), 1e-10);
}

TEST(Reference, ToyOneLevel) {
  IntegralSet s(1, 2, 0);
  s.set_one(1, 1, -0.75);
  EXPECT_DOUBLE_EQ(hf_energy(s), -1.5);
  // Filled sector has dimension 1: FCI is the single diagonal element.
  EXPECT_DOUBLE_EQ(fci_energy(s), -1.5);
}

TEST(Reference, IterativeAgreesWithDenseAndResidual) {
  const IntegralSet set = read_fcidump(oracle::data_path("h4_1.00.fcidump"));
  const FockSpace space = FockSpace::from_integrals(set);
  const auto basis = DeterminantBasis::sector(space);
  const SparseOperator h = build_hamiltonian(set, space, basis, true);
  const auto gs = fci_ground_state(set);
  const auto lz = lanczos_lowest(h);
  EXPECT_NEAR(lz.value, gs.energy, 1e-9);
  const double hnorm = Eigen::MatrixXd(h).cwiseAbs().rowwise().sum().maxCoeff();
  EXPECT_LE((h * gs.vector - gs.energy * gs.vector).norm(), 1e-9 * hnorm);
  EXPECT_LE((h * lz.vector - lz.value * lz.vector).norm(), 1e-9 * hnorm);
}

TEST(Reference, CisdSubspace) {
  const FockSpace space = FockSpace::make(8, 4);
  const auto b = excitation_subspace(space, 2);
  EXPECT_EQ(b.size(), 1u + 8u + 18u);
  EXPECT_TRUE(b.index_of(space.reference).has_value());
  EXPECT_EQ(excitation_subspace(space, 4).size(), DeterminantBasis::sector(space).size());
}
