#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdg/errors.hpp"

namespace pdg {

struct MetricsRecord {
    std::size_t count = 0;
    double rmse = 0.0;
    double mae = 0.0;
    double mape = 0.0; // mean absolute fractional error
    double mse = 0.0;
};

// All four metrics over one pass; rmse is computed as sqrt(mse) from the
// same accumulator. Throws DataError on empty or mismatched input, and on
// |y_true| <= 1e-9 (mape undefined), naming the offending index.
MetricsRecord compute_metrics(const std::vector<double>& y_true,
                              const std::vector<double>& y_pred);

// Single-line JSON with keys in fixed order: rmse, mae, mape, mse.
std::string metrics_json(const MetricsRecord& rec);

} // namespace pdg
