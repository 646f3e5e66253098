#pragma once

#include <vector>

#include <Eigen/Core>

namespace sswim {

/// sqrt(mean((y - mu)^2))
double rmse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& mu);

/// Mean negative Gaussian log density: 0.5 * mean(((y - mu) / sigma)^2 + log sigma^2 + log 2 pi).
double mnlp(const Eigen::VectorXd& y_true, const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma2);

struct Summary {
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for a single value
};

Summary summarize(const std::vector<double>& values);

struct MetricReport {
    double rmse = 0.0;
    double mnlp = 0.0;
    Eigen::Index n_test = 0;
};

struct AggregateReport {
    Summary rmse;
    Summary mnlp;
    std::size_t repeats = 0;
};

AggregateReport aggregate(const std::vector<MetricReport>& reports);

} // namespace sswim
