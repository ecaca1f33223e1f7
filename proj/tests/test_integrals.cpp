#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qfci/errors.hpp"
#include "qfci/integrals.hpp"

using namespace qfci;

namespace {

MolecularIntegrals parse(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

MolecularIntegrals h2() { return parse_fcidump_file(oracle::data_path(oracle::kH2Fixture)); }

}  // namespace

TEST(Fcidump, CoreEnergyOnly) {
  const auto mi = parse(" &FCI NORB=1, NELEC=2, MS2=0,\n  ORBSYM=1,\n  ISYM=1,\n &END\n -1.25 0 0 0 0\n");
  EXPECT_EQ(mi.n_orb, 1);
  EXPECT_EQ(mi.n_elec, 2);
  EXPECT_DOUBLE_EQ(mi.core_energy, -1.25);
  EXPECT_EQ(mi.one_body(0, 0), 0.0);
  EXPECT_EQ(mi.two_body(0, 0, 0, 0), 0.0);
}

TEST(Fcidump, SlashTerminatorAndFortranExponent) {
  const auto mi = parse("&FCI NORB=2,NELEC=2,MS2=0\n/\n0.5D+00 1 2 0 0\n1.0d-1 1 1 2 2\n");
  EXPECT_DOUBLE_EQ(mi.one_body(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(mi.one_body(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(mi.two_body(1, 1, 0, 0), 0.1);
}

TEST(Fcidump, ConsistentDuplicateAccepted) {
  const auto mi = parse("&FCI NORB=2,NELEC=2,MS2=0 &END\n0.5 1 2 0 0\n0.5 2 1 0 0\n");
  EXPECT_DOUBLE_EQ(mi.one_body(0, 1), 0.5);
}

TEST(Fcidump, ConflictingDuplicateRejected) {
  EXPECT_THROW(parse("&FCI NORB=2,NELEC=2,MS2=0 &END\n0.5 1 2 0 0\n0.6 2 1 0 0\n"), ConsistencyError);
  EXPECT_THROW(parse("&FCI NORB=2,NELEC=2,MS2=0 &END\n0.5 1 2 1 2\n0.5 2 1 1 2\n0.7 1 2 2 1\n"),
               ConsistencyError);
}

TEST(Fcidump, MalformedHeaderReportsLine) {
  try {
    parse("&FCI NELEC=2 &END\n0.5 1 1 0 0\n");
    FAIL() << "missing NORB accepted";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1u);
  }
  EXPECT_THROW(parse("NORB=2\n"), ParseError);
}

TEST(Fcidump, IndexOutOfRange) {
  try {
    parse("&FCI NORB=2,NELEC=2,MS2=0 &END\n0.1 1 1 0 0\n0.5 3 1 0 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("&FCI NORB=2,NELEC=2 &END\n0.5 -1 1 0 0\n"), ParseError);
}

TEST(Fcidump, ComplexAndUhfRejected) {
  EXPECT_THROW(parse("&FCI NORB=1,NELEC=2 &END\n(0.5,0.1) 1 1 0 0\n"), ParseError);
  EXPECT_THROW(parse("&FCI NORB=1,NELEC=2,UHF=.TRUE. &END\n0.5 1 1 0 0\n"), ParseError);
}

TEST(Fcidump, H2FixtureHasFourDistinctTwoBodyValues) {
  const auto mi = h2();
  EXPECT_EQ(mi.n_orb, 2);
  EXPECT_EQ(mi.n_elec, 2);
  std::set<long long> distinct;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          if (mi.two_body(p, q, r, s) != 0.0) distinct.insert(std::llround(mi.two_body(p, q, r, s) * 1e9));
  EXPECT_EQ(distinct.size(), 4u);
  EXPECT_NEAR(mi.core_energy, 0.7137249304118193, 1e-15);
  EXPECT_NEAR(mi.one_body(0, 0), -1.252445335032743, 1e-15);
  EXPECT_EQ(mi.one_body(0, 1), 0.0);
}

TEST(Fcidump, EightFoldSymmetryAfterParse) {
  const auto mi = h2();
  const auto& g = mi.two_body;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
          const double v = g(p, q, r, s);
          for (double w : {g(q, p, r, s), g(p, q, s, r), g(q, p, s, r), g(r, s, p, q), g(s, r, p, q),
                           g(r, s, q, p), g(s, r, q, p)})
            EXPECT_NEAR(v, w, 1e-12);
        }
}

TEST(Fcidump, WriteParseRoundTrip) {
  std::mt19937_64 rng(5);
  const auto mi = oracle::random_integrals(3, rng);
  std::stringstream buf;
  write_fcidump(buf, mi);
  const auto back = parse_fcidump(buf);
  EXPECT_EQ(back.n_orb, 3);
  EXPECT_DOUBLE_EQ(back.core_energy, mi.core_energy);
  EXPECT_TRUE(back.one_body.isApprox(mi.one_body, 0.0) || (back.one_body - mi.one_body).norm() < 1e-15);
  for (std::size_t i = 0; i < mi.two_body.data().size(); ++i)
    EXPECT_DOUBLE_EQ(back.two_body.data()[i], mi.two_body.data()[i]);
}

TEST(SpinOrbitals, SingleOrbital) {
  auto mi = MolecularIntegrals::zeros(1, 2, 0);
  mi.one_body(0, 0) = -1.0;
  mi.two_body(0, 0, 0, 0) = 0.5;
  const auto soi = to_spin_orbitals(mi);
  EXPECT_EQ(soi.n_so, 2);
  EXPECT_EQ(soi.h(0, 0), -1.0);
  EXPECT_EQ(soi.h(1, 1), -1.0);
  EXPECT_EQ(soi.h(0, 1), 0.0);
  EXPECT_EQ(soi.g(0, 1, 0, 1), 0.5);
  EXPECT_EQ(soi.g(1, 0, 1, 0), 0.5);
  EXPECT_EQ(soi.g(0, 0, 0, 0), 0.5);  // same-spin direct term, cancelled by antisymmetry later
  EXPECT_EQ(soi.g(0, 1, 1, 0), 0.0);  // spin-forbidden
}

TEST(SpinOrbitals, H2BlocksAndSelectionRules) {
  const auto mi = h2();
  const auto soi = to_spin_orbitals(mi);
  const int n = 2;
  EXPECT_TRUE(soi.h.block(0, 0, n, n).isApprox(soi.h.block(n, n, n, n)));
  EXPECT_EQ(soi.h.block(0, 0, n, n), mi.one_body);  // round trip of the alpha block
  EXPECT_TRUE(soi.h.block(0, n, n, n).isZero(0.0));
  int violations = 0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
          const double v = soi.g(p, q, r, s);
          const bool allowed = spin_of(p, n) == spin_of(r, n) && spin_of(q, n) == spin_of(s, n);
          if (!allowed && v != 0.0) ++violations;
          EXPECT_NEAR(v, soi.g(q, p, s, r), 1e-12);
          if (allowed)
            EXPECT_EQ(v, mi.two_body(spatial_of(p, n), spatial_of(r, n), spatial_of(q, n), spatial_of(s, n)));
        }
  EXPECT_EQ(violations, 0);
}

TEST(SpinOrbitals, ZeroMap) {
  auto mi = MolecularIntegrals::zeros(3, 2, 0);
  mi.core_energy = 0.25;
  const auto soi = to_spin_orbitals(mi);
  EXPECT_EQ(soi.core_energy, 0.25);
  EXPECT_TRUE(soi.h.isZero(0.0));
  for (double v : soi.g.data()) EXPECT_EQ(v, 0.0);
}
