#include "eit/design.hpp"
#include "eit/errors.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace eit;

TEST(Criteria, PermutationInvariance) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        ElectrodeConfig perm = cfg;
        std::shuffle(perm.phi.begin(), perm.phi.end(), rng);
        const double d = d_criterion(cfg, t, 1e-3);
        EXPECT_NEAR(d_criterion(perm, t, 1e-3), d, 1e-10 * d);
        const double e = e_criterion(cfg, t, 1e-3);
        EXPECT_NEAR(e_criterion(perm, t, 1e-3), e, 1e-9 * std::abs(e) + 1e-16);
    }
}

TEST(Criteria, DeterminantOfPenaltyOnly) {
    InformationMatrix m = InformationMatrix::Zero();
    m.diagonal() << 0, 0, 0, 1, 1;
    EXPECT_EQ(determinant(m), 0.0);
    m.diagonal() << 2, 3, 1, 1, 0.5;
    EXPECT_NEAR(determinant(m), 3.0, 1e-15);
}

TEST(Criteria, InformationMatrixComposition) {
    const EllipseParams t = reference_ellipse();
    const ElectrodeConfig cfg = ElectrodeConfig::uniform();
    RegularizationSpec reg;
    const Jacobian j = jacobian(t, cfg);
    InformationMatrix expect = j.transpose() * j;
    expect(3, 3) += 0.5;
    expect(4, 4) += 0.5;
    EXPECT_LT((information_matrix(cfg, t, 0.5, reg) - expect).norm(), 1e-12 * expect.norm());
    const double det = expect.determinant();
    EXPECT_NEAR(d_criterion(cfg, t, 0.5, reg), det, 1e-9 * std::abs(det));
}

TEST(Criteria, ClusteredElectrodesAreWorse) {
    const EllipseParams far{-0.5, 0.0, 0.02, 1.5, 0.3};
    const ElectrodeConfig clustered{{0.0, 0.051, 0.102, 0.153}};
    const ElectrodeConfig spread = ElectrodeConfig::uniform();
    EXPECT_LT(d_criterion(clustered, far, 0.0), d_criterion(spread, far, 0.0));
}

TEST(Criteria, EBoundedByDAndNonNegative) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng, 0.05);
        const double lambda = (i % 2) ? 1e-3 : 0.0;
        const double e = e_criterion(cfg, t, lambda);
        const double d = d_criterion(cfg, t, lambda);
        EXPECT_GE(e, -1e-10);
        EXPECT_LE(e, std::pow(std::max(d, 0.0), 1.0 / 5.0) * (1 + 1e-9) + 1e-12);
    }
}

TEST(Criteria, ContinuousAwayFromBoundary) {
    const EllipseParams t = reference_ellipse();
    ElectrodeConfig cfg{{0.4, 1.9, 3.3, 5.0}};
    const double d0 = d_criterion(cfg, t, 1e-3);
    cfg.phi[2] += 1e-8;
    EXPECT_LT(std::abs(d_criterion(cfg, t, 1e-3) - d0) / d0, 1e-4);
}

TEST(OptimizeDesign, BudgetOneReturnsUniform) {
    const DesignResult r = optimize_design(reference_ellipse(), 1e-3, {}, 1, 1);
    EXPECT_EQ(r.phi_opt, ElectrodeConfig::uniform());
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.objective_value, d_criterion(ElectrodeConfig::uniform(), reference_ellipse(), 1e-3));
}

TEST(OptimizeDesign, DeterministicPerSeed) {
    const DesignResult a = optimize_design(reference_ellipse(), 1e-3, {}, 5, 600);
    const DesignResult b = optimize_design(reference_ellipse(), 1e-3, {}, 5, 600);
    EXPECT_EQ(a.phi_opt, b.phi_opt);
    EXPECT_EQ(a.objective_value, b.objective_value);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].phi, b.trace[i].phi);
        EXPECT_EQ(a.trace[i].value, b.trace[i].value);
    }
    EXPECT_EQ(a.seed, 5u);
}

TEST(OptimizeDesign, ResultIsConsistentAndFeasible) {
    const double lambda = 6e-4;
    const EllipseParams t{0.46, -0.15, 0.0255, 1.23, 1.55};
    const DesignResult r = optimize_design(t, lambda, {}, 7, 2000);
    EXPECT_EQ(r.objective_value, d_criterion(r.phi_opt, t, lambda));
    EXPECT_GT(r.objective_value, d_criterion(ElectrodeConfig::uniform(), t, lambda));
    EXPECT_LE(static_cast<int>(r.trace.size()), 2000);
    EXPECT_TRUE(std::is_sorted(r.phi_opt.phi.begin(), r.phi_opt.phi.end()));
    EXPECT_NO_THROW(validate(r.phi_opt));
    for (const DesignEvaluation& e : r.trace) EXPECT_GE(e.phi.min_gap(), kMinElectrodeGap);
    double best = -1.0;
    for (const DesignEvaluation& e : r.trace) best = std::max(best, e.value);
    EXPECT_EQ(best, r.objective_value);
}

TEST(OptimizeDesign, SurrogateStrategyImprovesOnUniform) {
    DesignOptions o;
    o.strategy = SearchStrategy::BayesianOptimization;
    o.bo_candidates = 500;
    const DesignResult r = optimize_design(reference_ellipse(), 1e-3, {}, 3, 60, o);
    EXPECT_EQ(r.trace.size(), 60u);
    EXPECT_GE(r.objective_value, d_criterion(ElectrodeConfig::uniform(), reference_ellipse(), 1e-3));
    EXPECT_EQ(r.objective_value, d_criterion(r.phi_opt, reference_ellipse(), 1e-3));
}

TEST(OptimizeDesign, ECriterionSearch) {
    DesignOptions o;
    o.criterion = Criterion::EOptimal;
    const DesignResult r = optimize_design(reference_ellipse(), 1e-3, {}, 3, 300, o);
    EXPECT_EQ(r.criterion, Criterion::EOptimal);
    EXPECT_EQ(r.objective_value, e_criterion(r.phi_opt, reference_ellipse(), 1e-3));
}

TEST(OptimizeDesign, RejectsBadInput) {
    EXPECT_THROW((void)optimize_design(reference_ellipse(), 1e-3, {}, 1, 0), ConfigError);
    EXPECT_THROW((void)optimize_design(reference_ellipse(), -1.0, {}, 1, 10), ConfigError);
}
