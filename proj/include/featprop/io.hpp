#pragma once

#include <string>
#include <utility>
#include <vector>

#include "featprop/baselines.hpp"
#include "featprop/eval.hpp"
#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"

namespace featprop {

// One edge per line, two whitespace-separated 0-based ids; '#' comments and
// blank lines ignored. Malformed lines raise InputError with the line number.
std::vector<Edge> load_edge_list(const std::string& path);

// Header `node,f0,f1,...`; empty cell or `nan` marks a missing entry (value 0,
// mask false). Rows must cover nodes 0..n-1 in ascending order.
std::pair<FeatureMatrix, KnownMask> load_features_csv(const std::string& path);

// Same layout with 0/1 cells; 1 = known.
KnownMask load_mask_csv(const std::string& path);

// Header `node,label`; -1 = unlabeled.
LabelVector load_labels_csv(const std::string& path);

void write_features_csv(const std::string& path, const FeatureMatrix& x);

// Per-run rows plus an aggregate file. Timing columns are off by default so
// reports are byte-identical across reruns with the same seed.
void write_report_csv(const std::string& rows_path, const std::string& agg_path,
                      const EvalReport& report, bool include_seconds = false);

// Columns: eigenvalue, then one channel-averaged |coefficient| column per name.
void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<double>>& columns);

}  // namespace featprop
