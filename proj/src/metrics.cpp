#include "pdg/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace pdg {

MetricsRecord compute_metrics(const std::vector<double>& y_true,
                              const std::vector<double>& y_pred) {
    if (y_true.empty()) throw DataError("compute_metrics: empty input");
    if (y_true.size() != y_pred.size()) throw DataError("compute_metrics: length mismatch");

    double se = 0.0, ae = 0.0, ape = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_pred[i] - y_true[i];
        se += e * e;
        ae += std::abs(e);
        if (std::abs(y_true[i]) <= 1e-9)
            throw DataError("compute_metrics: |y_true| <= 1e-9 at index " + std::to_string(i) +
                            ", mape undefined");
        ape += std::abs(e / y_true[i]);
    }
    const auto n = static_cast<double>(y_true.size());
    MetricsRecord rec;
    rec.count = y_true.size();
    rec.mse = se / n;
    rec.rmse = std::sqrt(rec.mse);
    rec.mae = ae / n;
    rec.mape = ape / n;
    return rec;
}

std::string metrics_json(const MetricsRecord& rec) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"rmse\":%.17g,\"mae\":%.17g,\"mape\":%.17g,\"mse\":%.17g}", rec.rmse,
                  rec.mae, rec.mape, rec.mse);
    return buf;
}

} // namespace pdg
