#include <gtest/gtest.h>

#include "plab/config.hpp"
#include "plab/errors.hpp"
#include "plab/experiments.hpp"

using namespace plab;

namespace {

ExperimentConfig from_text(const std::string& experiment, const std::string& text) {
  return ExperimentConfig::from_config(experiment, KeyValueConfig::parse(text));
}

}  // namespace

TEST(ExperimentConfig, DefaultsPerExperiment) {
  const ExperimentConfig ident = from_text("verify-identities", "");
  EXPECT_EQ(ident.grids, (std::vector<int>{32, 64, 128}));
  const ExperimentConfig glob = from_text("global-estimate", "");
  EXPECT_EQ(glob.grids, (std::vector<int>{128}));
  EXPECT_EQ(glob.eps_list, (std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5}));
  EXPECT_NO_THROW(glob.validate());
  const ExperimentConfig c = from_text("solve", "seed = 42\nout = somewhere\n[profile]\np = 3\n[problem]\ndomain = annulus\n");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.out_dir, "somewhere");
  EXPECT_EQ(c.p, 3.0);
  EXPECT_EQ(c.domain, "annulus");
}

TEST(ExperimentConfig, ValidationRejectsInconsistentInput) {
  EXPECT_THROW(from_text("no-such-run", "").validate(), InvalidInput);
  EXPECT_THROW(from_text("solve", "[problem]\ngrids = 64,32\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("solve", "[problem]\ngrids = 4\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("global-estimate", "[problem]\neps_list = 1e-3,1e-2\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("global-estimate", "[problem]\neps_list = 2\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("solve", "[profile]\np = 0.5\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("solve", "[problem]\ndomain = hexagon\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("solve", "[problem]\nphi = nothing\n").validate(), InvalidInput);
  EXPECT_THROW(from_text("solve", "out =\n").validate(), InvalidInput);
}

TEST(MakeDomain, NamedShapes) {
  const DomainPtr disk = make_domain("disk", 16);
  EXPECT_DOUBLE_EQ(disk->h(), 1.0 / 16);
  EXPECT_TRUE(disk->shape()->contains(Vec2(0.9, 0)));
  const DomainPtr sq = make_domain("square:1", 8);
  EXPECT_TRUE(sq->shape()->contains(Vec2(0.9, 0.9)));
  const DomainPtr ann = make_domain("annulus:0.5:1", 16);
  EXPECT_FALSE(ann->shape()->contains(Vec2(0.3, 0)));
  EXPECT_THROW(make_domain("annulus:0.5", 16), InvalidInput);
  EXPECT_THROW(make_domain("disk:x", 16), InvalidInput);
}

TEST(Experiments, SmallRunsAreDeterministic) {
  const ExperimentConfig c = from_text("verify-cordes", "seed = 3\n[sweep]\ntrials = 300\ngeneral_trials = 300\n");
  const ExperimentReport a = run_experiment(c);
  const ExperimentReport b = run_experiment(c);
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t k = 0; k < a.tables.size(); ++k) EXPECT_EQ(a.tables[k].second.str(), b.tables[k].second.str());
  EXPECT_TRUE(a.passed());
  const ExperimentReport other = run_experiment(from_text("verify-cordes", "seed = 4\n[sweep]\ntrials = 300\ngeneral_trials = 300\n"));
  EXPECT_NE(other.tables[0].second.str(), a.tables[0].second.str());
}

TEST(Experiments, SolveReportsAffineExactness) {
  const ExperimentReport rep = run_solve(from_text("solve", "[profile]\np = 4\n[problem]\nphi = affine\ngrids = 16\n"));
  EXPECT_TRUE(rep.passed());
  bool found = false;
  for (const auto& c : rep.checks) found = found || c.name.find("affine data reproduced") != std::string::npos;
  EXPECT_TRUE(found);
  EXPECT_EQ(rep.tables.front().first, "solve_summary.csv");
  EXPECT_EQ(rep.tables.front().second.str().rfind("# plab-csv v1 solve_summary\n", 0), 0u);
}
