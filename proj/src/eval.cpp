#include "featprop/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "featprop/energy.hpp"
#include "featprop/rng.hpp"

namespace featprop {

KnownMask generate_mask(std::size_t n, std::size_t d, const MaskSpec& spec) {
  if (spec.missing_rate < 0.0 || spec.missing_rate > 1.0)
    throw InputError("generate_mask: missing_rate outside [0,1]");
  KnownMask mask(n, d, true);
  Rng rng(spec.seed);
  if (spec.mode == MaskMode::kEntrywise) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < d; ++c)
        if (rng.uniform() < spec.missing_rate) mask.set(i, c, false);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform() < spec.missing_rate)
        for (std::size_t c = 0; c < d; ++c) mask.set(i, c, false);
  }
  return mask;
}

namespace {

void shuffle_nodes(std::vector<NodeId>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.uniform_int(i)]);
}

}  // namespace

Splits make_splits(const LabelVector& y, const SplitSpec& spec) {
  if (y.num_classes <= 0) throw InputError("make_splits: num_classes must be positive");
  std::vector<std::vector<NodeId>> by_class(y.num_classes);
  for (std::size_t i = 0; i < y.labels.size(); ++i)
    if (y.labels[i] >= 0) by_class[y.labels[i]].push_back(static_cast<NodeId>(i));

  Rng rng(spec.seed);
  Splits out;
  std::vector<NodeId> pool;
  for (int c = 0; c < y.num_classes; ++c) {
    auto& nodes = by_class[c];
    if (nodes.size() < spec.train_per_class)
      throw InputError("make_splits: class " + std::to_string(c) + " has only " +
                       std::to_string(nodes.size()) + " labeled nodes, need " +
                       std::to_string(spec.train_per_class));
    shuffle_nodes(nodes, rng);
    out.train.insert(out.train.end(), nodes.begin(), nodes.begin() + spec.train_per_class);
    pool.insert(pool.end(), nodes.begin() + spec.train_per_class, nodes.end());
  }
  std::sort(pool.begin(), pool.end());
  if (pool.size() < spec.val_total)
    throw InputError("make_splits: val_total exceeds remaining labeled nodes");
  shuffle_nodes(pool, rng);
  out.val.assign(pool.begin(), pool.begin() + spec.val_total);
  out.test.assign(pool.begin() + spec.val_total, pool.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Dataset generate_sbm(const SbmSpec& spec) {
  if (spec.num_classes == 0 || spec.num_nodes == 0)
    throw InputError("generate_sbm: empty spec");
  if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0)
    throw InputError("generate_sbm: edge probabilities outside [0,1]");

  const std::size_t n = spec.num_nodes, k = spec.num_classes, d = spec.feature_dim;
  Rng rng(spec.seed);

  Dataset data;
  data.labels.num_classes = static_cast<int>(k);
  data.labels.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) data.labels.labels[i] = static_cast<int>(i % k);

  FeatureMatrix means(k, d);
  for (double& v : means.values) v = rng.normal() * spec.class_mean_scale;
  data.features = FeatureMatrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* mu = means.row(static_cast<std::size_t>(data.labels.labels[i]));
    double* row = data.features.row(i);
    for (std::size_t c = 0; c < d; ++c) row[c] = mu[c] + rng.normal();
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p =
          data.labels.labels[i] == data.labels.labels[j] ? spec.p_in : spec.p_out;
      if (rng.uniform() < p)
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  data.graph = build_graph(edges, n);
  return data;
}

void sbm_rates_for_homophily(std::size_t num_nodes, std::size_t num_classes,
                             double avg_degree, double homophily, double& p_in,
                             double& p_out) {
  std::vector<std::size_t> sizes(num_classes, 0);
  for (std::size_t i = 0; i < num_nodes; ++i) ++sizes[i % num_classes];
  double same_pairs = 0.0;
  for (std::size_t s : sizes) same_pairs += 0.5 * static_cast<double>(s) * (s - 1);
  const double total_pairs =
      0.5 * static_cast<double>(num_nodes) * (num_nodes - 1);
  const double cross_pairs = total_pairs - same_pairs;
  const double edges = avg_degree * static_cast<double>(num_nodes) / 2.0;
  p_in = std::clamp(homophily * edges / same_pairs, 0.0, 1.0);
  p_out = std::clamp((1.0 - homophily) * edges / cross_pairs, 0.0, 1.0);
}

double edge_homophily(const Graph& g, const LabelVector& y) {
  if (y.labels.size() != g.num_nodes) throw InputError("edge_homophily: label count mismatch");
  std::size_t same = 0, total = 0;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    if (y.labels[i] < 0) throw InputError("edge_homophily: unlabeled node " + std::to_string(i));
    for (NodeId j : g.neighbors(i)) {
      if (j <= i) continue;
      ++total;
      if (y.labels[i] == y.labels[j]) ++same;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(total);
}

namespace {

// logits for one node under weights ((d+1) x k, last row bias)
void node_logits(const FeatureMatrix& x, const FeatureMatrix& w, NodeId i,
                 std::vector<double>& out) {
  const std::size_t d = x.cols, k = w.cols;
  for (std::size_t c = 0; c < k; ++c) out[c] = w(d, c);
  const double* row = x.row(i);
  for (std::size_t f = 0; f < d; ++f) {
    const double v = row[f];
    if (v == 0.0) continue;
    const double* wr = w.row(f);
    for (std::size_t c = 0; c < k; ++c) out[c] += v * wr[c];
  }
}

void softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

double l2_penalty(const FeatureMatrix& w, double l2) {
  // bias row excluded
  double s = 0.0;
  for (std::size_t f = 0; f + 1 < w.rows; ++f)
    for (std::size_t c = 0; c < w.cols; ++c) s += w(f, c) * w(f, c);
  return 0.5 * l2 * s;
}

}  // namespace

double multinomial_loss(const FeatureMatrix& x, const LabelVector& y,
                        const std::vector<NodeId>& rows, const FeatureMatrix& w, double l2) {
  const std::size_t k = w.cols;
  std::vector<double> z(k);
  double loss = 0.0;
  for (NodeId i : rows) {
    node_logits(x, w, i, z);
    softmax_inplace(z);
    loss -= std::log(std::max(z[static_cast<std::size_t>(y.labels[i])], 1e-300));
  }
  return loss / static_cast<double>(rows.size()) + l2_penalty(w, l2);
}

FeatureMatrix multinomial_gradient(const FeatureMatrix& x, const LabelVector& y,
                                   const std::vector<NodeId>& rows, const FeatureMatrix& w,
                                   double l2) {
  const std::size_t d = x.cols, k = w.cols;
  FeatureMatrix grad(d + 1, k);
  std::vector<double> z(k);
  for (NodeId i : rows) {
    node_logits(x, w, i, z);
    softmax_inplace(z);
    z[static_cast<std::size_t>(y.labels[i])] -= 1.0;
    const double* row = x.row(i);
    for (std::size_t f = 0; f < d; ++f) {
      const double v = row[f];
      if (v == 0.0) continue;
      double* gr = grad.row(f);
      for (std::size_t c = 0; c < k; ++c) gr[c] += v * z[c];
    }
    double* gb = grad.row(d);
    for (std::size_t c = 0; c < k; ++c) gb[c] += z[c];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& v : grad.values) v *= inv;
  for (std::size_t f = 0; f < d; ++f)
    for (std::size_t c = 0; c < k; ++c) grad(f, c) += l2 * w(f, c);
  return grad;
}

double classify_accuracy(const FeatureMatrix& x, const LabelVector& y,
                         const std::vector<NodeId>& rows, const FeatureMatrix& w) {
  if (rows.empty()) return 0.0;
  const std::size_t k = w.cols;
  std::vector<double> z(k);
  std::size_t hit = 0;
  for (NodeId i : rows) {
    node_logits(x, w, i, z);
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c)
      if (z[c] > z[best]) best = c;
    if (static_cast<int>(best) == y.labels[i]) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

ClassifierResult train_linear_classifier(const FeatureMatrix& x, const LabelVector& y,
                                         const Splits& splits, const ClassifierConfig& cfg) {
  if (splits.train.empty() || splits.val.empty())
    throw InputError("train_linear_classifier: empty train or val split");
  for (NodeId i : splits.train)
    if (y.labels[i] < 0) throw InputError("train_linear_classifier: unlabeled train node");
  {
    std::vector<bool> seen(y.num_classes, false);
    std::size_t distinct = 0;
    for (NodeId i : splits.train)
      if (!seen[y.labels[i]]) {
        seen[y.labels[i]] = true;
        ++distinct;
      }
    if (distinct < 2) throw InputError("train_linear_classifier: <2 classes in train split");
  }

  const std::size_t d = x.cols, k = static_cast<std::size_t>(y.num_classes);
  FeatureMatrix w(d + 1, k);
  Rng rng(cfg.seed);
  for (double& v : w.values) v = 0.01 * rng.normal();

  ClassifierResult res;
  FeatureMatrix best_w = w;
  double best_val = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    res.train_loss.push_back(multinomial_loss(x, y, splits.train, w, cfg.l2));
    const FeatureMatrix grad = multinomial_gradient(x, y, splits.train, w, cfg.l2);
    for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] -= cfg.lr * grad.values[i];

    const double val_acc = classify_accuracy(x, y, splits.val, w);
    res.epochs = epoch + 1;
    if (val_acc > best_val) {
      best_val = val_acc;
      best_w = w;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }

  res.weights = std::move(best_w);
  res.train_accuracy = classify_accuracy(x, y, splits.train, res.weights);
  res.val_accuracy = best_val;
  res.test_accuracy = classify_accuracy(x, y, splits.test, res.weights);
  return res;
}

double rmse_unknown(const FeatureMatrix& original, const FeatureMatrix& reconstructed,
                    const KnownMask& m, bool standardize) {
  require_shape(reconstructed, original.rows, original.cols, "rmse_unknown");
  require_mask_shape(m, original.rows, original.cols, "rmse_unknown");

  std::vector<double> scale(original.cols, 1.0);
  if (standardize) {
    for (std::size_t c = 0; c < original.cols; ++c) {
      double sum = 0.0, sq = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i < original.rows; ++i)
        if (m(i, c)) {
          sum += original(i, c);
          sq += original(i, c) * original(i, c);
          ++cnt;
        }
      if (cnt > 0) {
        const double mean = sum / cnt;
        const double var = std::max(sq / cnt - mean * mean, 0.0);
        if (var > 1e-24) scale[c] = 1.0 / std::sqrt(var);
      }
    }
  }

  double acc = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < original.rows; ++i)
    for (std::size_t c = 0; c < original.cols; ++c)
      if (!m(i, c)) {
        const double diff = (original(i, c) - reconstructed(i, c)) * scale[c];
        acc += diff * diff;
        ++cnt;
      }
  return cnt == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(cnt));
}

namespace {

const double kLpAlphaGrid[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};

double split_accuracy(const std::vector<int>& pred, const LabelVector& y,
                      const std::vector<NodeId>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t hit = 0;
  for (NodeId i : rows)
    if (pred[i] == y.labels[i]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

// z-score each channel so the fixed learning rate is well conditioned
// regardless of the imputation's output scale
FeatureMatrix standardize_columns(const FeatureMatrix& x) {
  FeatureMatrix out = x;
  const double inv_n = 1.0 / static_cast<double>(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) mean += x(i, c);
    mean *= inv_n;
    double var = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double dv = x(i, c) - mean;
      var += dv * dv;
    }
    const double sd = std::sqrt(var * inv_n);
    const double scale = sd > 1e-12 ? 1.0 / sd : 1.0;
    for (std::size_t i = 0; i < x.rows; ++i) out(i, c) = (x(i, c) - mean) * scale;
  }
  return out;
}

}  // namespace

EvalReport run_sweep(const Dataset& data, const std::vector<std::string>& methods,
                     const std::vector<double>& missing_rates, std::size_t runs,
                     std::uint64_t master_seed, const SplitSpec& split_base,
                     const ClassifierConfig& clf_base, const PropagationConfig& prop) {
  const std::size_t n = data.features.rows, d = data.features.cols;
  EvalReport report;

  for (std::size_t run = 0; run < runs; ++run) {
    SplitSpec split_spec = split_base;
    split_spec.seed = mix_seed(master_seed, run * 1000 + 1);
    const Splits splits = make_splits(data.labels, split_spec);

    for (std::size_t ri = 0; ri < missing_rates.size(); ++ri) {
      const double rate = missing_rates[ri];
      MaskSpec mspec{rate, MaskMode::kEntrywise,
                     mix_seed(master_seed, run * 1000 + 10 + ri)};
      const KnownMask mask = generate_mask(n, d, mspec);
      // observed view: unknown entries blanked so no method can leak them
      const FeatureMatrix observed = zero_fill(data.features, mask);

      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const std::string& method = methods[mi];
        const auto t0 = std::chrono::steady_clock::now();

        SweepRow row;
        row.method = method;
        row.missing_rate = rate;
        row.run = run;

        if (method == "lp") {
          LabelVector partial;
          partial.num_classes = data.labels.num_classes;
          partial.labels.assign(n, -1);
          for (NodeId i : splits.train) partial.labels[i] = data.labels.labels[i];
          double best_val = -1.0, best_test = 0.0;
          for (double alpha : kLpAlphaGrid) {
            const FeatureMatrix scores = label_propagation(data.graph, partial, alpha);
            const std::vector<int> pred = predict_labels(scores);
            const double val_acc = split_accuracy(pred, data.labels, splits.val);
            if (val_acc > best_val) {
              best_val = val_acc;
              best_test = split_accuracy(pred, data.labels, splits.test);
            }
          }
          row.rmse = std::numeric_limits<double>::quiet_NaN();
          row.energy = std::numeric_limits<double>::quiet_NaN();
          row.accuracy = best_test;
        } else {
          FeatureMatrix imputed;
          if (method == "zero") {
            imputed = observed;
          } else if (method == "random") {
            imputed = random_fill(observed, mask,
                                  mix_seed(master_seed, run * 1000 + 100 + ri));
          } else if (method == "global_mean") {
            imputed = global_mean_fill(observed, mask);
          } else if (method == "neighbor_mean") {
            imputed = neighbor_mean_fill(data.graph, observed, mask);
          } else if (method == "fp") {
            imputed = feature_propagate(data.graph, observed, mask, prop).first;
          } else {
            throw InputError("run_sweep: unknown method '" + method + "'");
          }

          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < d; ++c)
              if (mask(i, c) && imputed(i, c) != data.features(i, c))
                throw SolveError("run_sweep: method '" + method + "' altered a known entry");

          row.rmse = rmse_unknown(data.features, imputed, mask, /*standardize=*/true);
          const std::vector<double> energy = dirichlet_energy(data.graph, imputed);
          row.energy = std::accumulate(energy.begin(), energy.end(), 0.0);

          ClassifierConfig clf = clf_base;
          clf.seed = mix_seed(master_seed, run * 1000 + 200 + ri);
          row.accuracy =
              train_linear_classifier(standardize_columns(imputed), data.labels, splits, clf)
                  .test_accuracy;
        }

        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(std::move(row));
      }
    }
  }

  // aggregate per (method, rate) preserving first-seen order
  std::vector<std::pair<std::string, double>> keys;
  for (const auto& row : report.rows) {
    const std::pair<std::string, double> key{row.method, row.missing_rate};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [method, rate] : keys) {
    std::vector<double> acc, rmse, energy, seconds;
    for (const auto& row : report.rows)
      if (row.method == method && row.missing_rate == rate) {
        acc.push_back(row.accuracy);
        rmse.push_back(row.rmse);
        energy.push_back(row.energy);
        seconds.push_back(row.seconds);
      }
    auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    SweepAggregate agg;
    agg.method = method;
    agg.missing_rate = rate;
    agg.accuracy_mean = mean(acc);
    double var = 0.0;
    for (double a : acc) var += (a - agg.accuracy_mean) * (a - agg.accuracy_mean);
    agg.accuracy_stderr =
        acc.size() > 1 ? std::sqrt(var / static_cast<double>(acc.size() - 1) /
                                   static_cast<double>(acc.size()))
                       : 0.0;
    agg.rmse_mean = mean(rmse);
    agg.energy_mean = mean(energy);
    agg.seconds_mean = mean(seconds);
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

}  // namespace featprop
