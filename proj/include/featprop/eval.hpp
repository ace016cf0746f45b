#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "featprop/baselines.hpp"
#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"
#include "featprop/propagation.hpp"

namespace featprop {

enum class MaskMode { kEntrywise, kNodewise };

struct MaskSpec {
  double missing_rate = 0.0;  // in [0, 1]
  MaskMode mode = MaskMode::kEntrywise;
  std::uint64_t seed = 0;
};

struct SplitSpec {
  std::size_t train_per_class = 20;
  std::size_t val_total = 1500;
  std::uint64_t seed = 0;
};

struct Splits {
  std::vector<NodeId> train, val, test;
};

struct SbmSpec {
  std::size_t num_nodes = 0;
  std::size_t num_classes = 2;
  double p_in = 0.0;
  double p_out = 0.0;
  std::size_t feature_dim = 1;
  double class_mean_scale = 1.0;
  std::uint64_t seed = 0;
};

struct Dataset {
  Graph graph;
  FeatureMatrix features;
  LabelVector labels;
};

struct ClassifierConfig {
  double lr = 0.005;
  std::size_t max_epochs = 10000;
  std::size_t patience = 200;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct ClassifierResult {
  FeatureMatrix weights;  // (d+1) x num_classes, last row = bias
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t epochs = 0;
  std::vector<double> train_loss;  // one entry per epoch
};

struct SweepRow {
  std::string method;
  double missing_rate = 0.0;
  std::size_t run = 0;
  double rmse = 0.0;
  double energy = 0.0;
  double accuracy = 0.0;
  double seconds = 0.0;
};

struct SweepAggregate {
  std::string method;
  double missing_rate = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_stderr = 0.0;
  double rmse_mean = 0.0;
  double energy_mean = 0.0;
  double seconds_mean = 0.0;
};

struct EvalReport {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
};

KnownMask generate_mask(std::size_t n, std::size_t d, const MaskSpec& spec);

// Stratified train (train_per_class labeled nodes per class), uniform val from
// the remaining labeled nodes, test = rest. Deterministic per seed.
Splits make_splits(const LabelVector& y, const SplitSpec& spec);

// Planted-partition graph; features = fixed per-class mean (N(0,1)*scale) plus
// N(0,1) per-node noise. Deterministic per seed.
Dataset generate_sbm(const SbmSpec& spec);

// Picks p_in/p_out hitting a target edge homophily at a target average degree.
void sbm_rates_for_homophily(std::size_t num_nodes, std::size_t num_classes,
                             double avg_degree, double homophily, double& p_in,
                             double& p_out);

// Fraction of undirected edges whose endpoints share a label.
double edge_homophily(const Graph& g, const LabelVector& y);

// Mean cross-entropy + (l2/2)||W||^2 over the given rows; weights layout as in
// ClassifierResult. Exposed for finite-difference checks.
double multinomial_loss(const FeatureMatrix& x, const LabelVector& y,
                        const std::vector<NodeId>& rows, const FeatureMatrix& w, double l2);
FeatureMatrix multinomial_gradient(const FeatureMatrix& x, const LabelVector& y,
                                   const std::vector<NodeId>& rows, const FeatureMatrix& w,
                                   double l2);

// Full-batch gradient descent, early stopping on validation accuracy; the
// returned weights are the best-validation snapshot.
ClassifierResult train_linear_classifier(const FeatureMatrix& x, const LabelVector& y,
                                         const Splits& splits, const ClassifierConfig& cfg);

double classify_accuracy(const FeatureMatrix& x, const LabelVector& y,
                         const std::vector<NodeId>& rows, const FeatureMatrix& w);

// RMSE over entries with m = false; 0 when there are none. With standardize,
// both matrices are z-scored per channel using the known entries of original.
double rmse_unknown(const FeatureMatrix& original, const FeatureMatrix& reconstructed,
                    const KnownMask& m, bool standardize = false);

// Methods: zero | random | global_mean | neighbor_mean | fp | lp.
EvalReport run_sweep(const Dataset& data, const std::vector<std::string>& methods,
                     const std::vector<double>& missing_rates, std::size_t runs,
                     std::uint64_t master_seed, const SplitSpec& split_base,
                     const ClassifierConfig& clf_base, const PropagationConfig& prop);

}  // namespace featprop
