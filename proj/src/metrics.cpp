#include "sswim/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sswim/errors.hpp"

namespace sswim {

double rmse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& mu) {
    require_dim(mu.size(), y_true.size(), "rmse");
    if (y_true.size() < 1) throw std::invalid_argument("rmse: empty input");
    return std::sqrt((y_true - mu).squaredNorm() / static_cast<double>(y_true.size()));
}

double mnlp(const Eigen::VectorXd& y_true, const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma2) {
    require_dim(mu.size(), y_true.size(), "mnlp mean");
    require_dim(sigma2.size(), y_true.size(), "mnlp variance");
    if (y_true.size() < 1) throw std::invalid_argument("mnlp: empty input");
    if (!(sigma2.array() > 0.0).all()) throw std::invalid_argument("mnlp: variances must be positive");
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    const auto per_point = (y_true - mu).array().square() / sigma2.array() + sigma2.array().log() + log_2pi;
    return 0.5 * per_point.mean();
}

Summary summarize(const std::vector<double>& values) {
    Summary out;
    if (values.empty()) return out;
    double total = 0.0;
    for (double v : values) total += v;
    out.mean = total / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return out;
}

AggregateReport aggregate(const std::vector<MetricReport>& reports) {
    std::vector<double> r;
    std::vector<double> m;
    for (const auto& rep : reports) {
        r.push_back(rep.rmse);
        m.push_back(rep.mnlp);
    }
    return {summarize(r), summarize(m), reports.size()};
}

} // namespace sswim
