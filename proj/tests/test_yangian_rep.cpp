#include <gtest/gtest.h>

#include "dyhat/yangian_rep.hpp"

using namespace dyhat;

namespace {

const ScalarPoly kH = ScalarPoly::variable(kHbar);

Cutoffs small_cut() {
  Cutoffs c;
  c.e_max = 3;
  c.m_lo = -3;
  c.m_hi = 3;
  c.u_lo = -3;
  c.u_hi = 2;
  return c;
}

ScalarPoly entry(const SparseOp<ScalarPoly>& op, const FockState& out, const FockState& in) {
  return op.entry(op.basis->index(out), op.basis->index(in));
}

// e(u) or f(u) applied to a vector, then the u^power coefficient: direct
// application without matrices.
FockVector<ScalarPoly> apply_mode_direct(const VertexOpSpec& spec, const FockVector<ScalarPoly>& v, int power,
                                         const Cutoffs& cut) {
  FockVector<ScalarPoly> out;
  for (const auto& [s, c] : v) {
    auto img = mode_coefficient(apply_vertex(spec, s, cut), power);
    for (const auto& [t, x] : img) {
      ScalarPoly add = c * x;
      auto it = out.find(t);
      if (it == out.end()) out.emplace(t, add);
      else it->second += add;
    }
  }
  return out;
}

}  // namespace

TEST(YangianRep, HZeroIsIdentity) {
  Cutoffs c;
  auto h0 = build_mode(Family::HPlus, 0, 0, c).op;
  const auto& b = *h0.basis;
  for (size_t j = 0; j < b.size(); ++j) {
    auto col = h0.column(static_cast<int>(j));
    ASSERT_EQ(col.size(), 1u);
    EXPECT_EQ(col.begin()->first, b.state(j));
    EXPECT_EQ(col.begin()->second, ScalarPoly(1));
  }
}

TEST(YangianRep, ModeExamples) {
  Cutoffs c;
  LevelOneRep rep(0, c);
  auto em2 = rep.mode(Family::E, -2);
  EXPECT_EQ(em2.power, 1);
  EXPECT_EQ(entry(em2.op, FockState{2, {1}}, FockState::vacuum()), ScalarPoly(2));
  EXPECT_TRUE(entry(em2.op, FockState::vacuum(2), FockState::vacuum()).is_zero());
  // h-(v)|0> = (1 - 2 hbar a_{-1} - 2 hbar v a_{-2} + ...)|0>
  auto hm0 = rep.mode(Family::HMinus, 0), hm1 = rep.mode(Family::HMinus, 1);
  auto direct = apply_vertex(vertex_hminus(c.e_max, -12), FockState::vacuum(), c);
  EXPECT_EQ(entry(hm0.op, FockState{0, {1}}, FockState::vacuum()), BigRat(-2) * kH);
  EXPECT_EQ(entry(hm0.op, FockState{0, {1}}, FockState::vacuum()), direct.at(FockState{0, {1}})[0]);
  EXPECT_EQ(entry(hm1.op, FockState{0, {2}}, FockState::vacuum()), BigRat(-2) * kH);
  EXPECT_EQ(entry(hm1.op, FockState{0, {2}}, FockState::vacuum()), direct.at(FockState{0, {2}})[1]);
  EXPECT_TRUE(entry(hm1.op, FockState{0, {1}}, FockState::vacuum()).is_zero());
}

TEST(YangianRep, ModeRangeErrors) {
  LevelOneRep rep(0, small_cut());
  EXPECT_THROW(rep.mode(Family::HPlus, -1), std::invalid_argument);
  EXPECT_THROW(rep.mode(Family::HMinus, -2), std::invalid_argument);
  EXPECT_THROW(verify_relation(rep, "nope"), std::invalid_argument);
}

TEST(YangianRep, ModesAreWeightGraded) {
  LevelOneRep rep(1, small_cut());
  for (Family f : {Family::E, Family::F, Family::HPlus, Family::HMinus})
    for (int p = -3; p <= 2; ++p) {
      const auto& op = rep.coefficient(f, p);
      for (size_t j = 0; j < op.cols.size(); ++j)
        for (const auto& [i, x] : op.cols[j]) {
          EXPECT_EQ(op.basis->state(i).m, op.basis->state(j).m + family_shift(f));
          EXPECT_EQ(op.basis->state(i).sector(), 1);
        }
    }
}

TEST(YangianRep, HModeDictionary) {
  Cutoffs c = small_cut();
  LevelOneRep rep(0, c);
  auto basis = rep.basis();
  // h_0 = p
  auto h0 = h_mode(rep, 0);
  auto p = heisenberg_matrix(basis, HeisenbergOp::p());
  for (size_t j = 0; j < basis->size(); ++j)
    EXPECT_EQ(h0.entry(static_cast<int>(j), static_cast<int>(j)), p.entry(static_cast<int>(j), static_cast<int>(j)));
  // h_{-1} = (1 - Hm_0)/hbar; Hm_0 = exp(-2 sum_{n odd} hbar^n a_{-n}/n), so h_{-1}|0> = 2 a_{-1}|0> + ...
  auto hm1 = h_mode(rep, -1);
  EXPECT_EQ(entry(hm1, FockState{0, {1}}, FockState::vacuum()), ScalarPoly(2));
  EXPECT_TRUE(entry(hm1, FockState::vacuum(), FockState::vacuum()).is_zero());
  // [h_0, e_k] = 2 e_k
  for (int k = -2; k <= 1; ++k) {
    auto ek = rep.mode(Family::E, k).op;
    auto a = product(h0, ek), b = product(ek, h0);
    auto d = combine<ScalarPoly>({{ScalarPoly(1), &a}, {ScalarPoly(-1), &b}, {ScalarPoly(-2), &ek}});
    Residual r;
    record_operator(r, d, "h0");
    r.finish();
    EXPECT_EQ(r.status, Status::Pass) << k;
  }
}

TEST(YangianRep, ExchangeRelationsHoldOnBothSectors) {
  Cutoffs c = small_cut();
  for (int sector = 0; sector < 2; ++sector) {
    LevelOneRep rep(sector, c);
    for (const auto& rel : exchange_relations()) {
      auto r = verify_exchange(rep, rel);
      EXPECT_EQ(r.status, Status::Pass) << rel.id << " sector " << sector << " "
                                        << (r.failures.empty() ? r.note : r.failures.front());
      EXPECT_GT(r.trusted, 0) << rel.id;
    }
  }
}

// A wrong sign in a multiplier must be detected.
TEST(YangianRep, ExchangeDetectsWrongRelation) {
  LevelOneRep rep(0, small_cut());
  const VarList vars{kHbar, "u", "v"};
  for (const auto& [a, b, p, q] : std::vector<std::tuple<Family, Family, const char*, const char*>>{
           {Family::E, Family::E, "u-v+hbar", "u-v-hbar"},
           {Family::HPlus, Family::F, "u-v", "u-v-hbar"},
           {Family::HPlus, Family::HMinus, "(u-v-hbar)*(u-v)", "(u-v+hbar)*(u-v-hbar)"}}) {
    RelationInstance rel{"wrong", a, b, parse_poly(p, vars), parse_poly(q, vars)};
    EXPECT_EQ(verify_exchange(rep, rel).status, Status::Fail) << p;
  }
}

TEST(YangianRep, EfDeltaHolds) {
  Cutoffs c = small_cut();
  for (int sector = 0; sector < 2; ++sector) {
    LevelOneRep rep(sector, c);
    auto r = verify_ef_delta(rep);
    EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
    EXPECT_GT(r.trusted, 0);
  }
}

// [e_0, f_{-1}]|0> computed by applying the currents one after the other
// equals h_{-1}|0>.
TEST(YangianRep, EfDeltaVacuumByDirectApplication) {
  Cutoffs c;
  LevelOneRep rep(0, c);
  FockVector<ScalarPoly> vac{{FockState::vacuum(), ScalarPoly(1)}};
  auto fv = apply_mode_direct(vertex_f(c.e_max, -12), vac, 0, c);
  auto efv = apply_mode_direct(vertex_e(c.e_max, -12), fv, -1, c);
  auto ev = apply_mode_direct(vertex_e(c.e_max, -12), vac, -1, c);
  EXPECT_TRUE(ev.empty());
  auto h = h_mode(rep, -1).column(rep.basis()->index(FockState::vacuum()));
  // trust: outputs of energy <= e_max - 2 only see intermediates below e_max
  int compared = 0;
  for (const auto& [t, x] : h)
    if (t.energy() <= c.e_max - 2) {
      ScalarPoly y = efv.count(t) ? efv.at(t) : ScalarPoly(0);
      EXPECT_EQ(x, y) << t.str();
      ++compared;
    }
  for (const auto& [t, y] : efv)
    if (t.energy() <= c.e_max - 2 && !h.count(t)) EXPECT_TRUE(y.is_zero()) << t.str();
  EXPECT_GE(compared, 2);
}

// [e_k, f_{-k}] = h_0 + k
TEST(YangianRep, EfCartanIdentity) {
  LevelOneRep rep(1, small_cut());
  auto h0 = h_mode(rep, 0);
  auto basis = rep.basis();
  SparseOp<ScalarPoly> id(basis, 0, EnergyBound{true, 0});
  for (size_t j = 0; j < basis->size(); ++j) id.cols[j].emplace_back(static_cast<int>(j), ScalarPoly(1));
  for (int k = -1; k <= 1; ++k) {
    auto ef = product(rep.mode(Family::E, k).op, rep.mode(Family::F, -k).op);
    auto fe = product(rep.mode(Family::F, -k).op, rep.mode(Family::E, k).op);
    auto d = combine<ScalarPoly>(
        {{ScalarPoly(1), &ef}, {ScalarPoly(-1), &fe}, {ScalarPoly(-1), &h0}, {ScalarPoly(-k), &id}});
    Residual r;
    record_operator(r, d, "cartan");
    r.finish();
    EXPECT_EQ(r.status, Status::Pass) << k << " " << (r.failures.empty() ? r.note : r.failures.front());
  }
}

TEST(YangianRep, DCovarianceHolds) {
  Cutoffs c = small_cut();
  for (int sector = 0; sector < 2; ++sector) {
    LevelOneRep rep(sector, c);
    auto r = verify_d_covariance(rep, 3);
    EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
    EXPECT_GT(r.trusted, 0);
  }
}

TEST(YangianRep, ShiftPreservesHeisenbergBrackets) {
  Cutoffs c = small_cut();
  LevelOneRep rep(0, c);
  auto r = verify_shift_brackets(rep, 3);
  EXPECT_EQ(r.status, Status::Pass) << (r.failures.empty() ? r.note : r.failures.front());
  EXPECT_GT(r.trusted, 0);
  EXPECT_EQ(verify_relation(rep, "shift-brackets").id, "shift-brackets");
}

// Larger cutoffs trust more entries and still find no residual; overlapping
// windows agree.
TEST(YangianRep, CutoffMonotonicity) {
  Cutoffs a = small_cut(), b = small_cut();
  b.e_max = 4;
  b.u_lo = -4;
  b.u_hi = 3;
  LevelOneRep ra(0, a), rb(0, b);
  for (const char* id : {"ee", "h+f", "ef-delta"}) {
    auto x = verify_relation(ra, id), y = verify_relation(rb, id);
    EXPECT_EQ(x.status, Status::Pass) << id;
    EXPECT_EQ(y.status, Status::Pass) << id;
    EXPECT_GT(y.trusted, x.trusted) << id;
  }
}

TEST(YangianRep, NoTrustedEntriesFails) {
  Cutoffs c;
  c.e_max = 0;
  c.m_lo = 0;
  c.m_hi = 0;
  c.u_lo = -1;
  c.u_hi = 0;
  LevelOneRep rep(0, c);
  auto r = verify_relation(rep, "ee");
  EXPECT_EQ(r.status, Status::Fail);
  EXPECT_EQ(r.trusted, 0);
}

TEST(YangianRep, TrustedCoverageAtDefaults) {
  Cutoffs c;
  LevelOneRep rep(0, c);
  for (const auto& id : relation_catalog()) {
    auto r = verify_relation(rep, id);
    EXPECT_EQ(r.status, Status::Pass) << id;
    EXPECT_GT(r.trusted, 200) << id;
  }
}
