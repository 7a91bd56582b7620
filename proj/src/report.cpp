#include "wpsdo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace wpsdo {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::hypothesis_unverified: return "hypothesis_unverified";
    }
    return "unknown";
}

double VerificationReport::metric(const std::string& name) const {
    for (const auto& [k, v] : metrics)
        if (k == name) return v;
    throw std::out_of_range("no metric named " + name);
}

void VerificationReport::set_metric(const std::string& name, double value) {
    for (auto& [k, v] : metrics) {
        if (k == name) {
            v = value;
            return;
        }
    }
    metrics.emplace_back(name, value);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LinearFit fit;
    fit.count = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    // A constant response is fitted exactly.
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double max_value(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("max of empty set");
    return *std::max_element(values.begin(), values.end());
}

void aggregate_items(VerificationReport& report) {
    std::vector<double> v;
    v.reserve(report.items.size());
    for (const auto& item : report.items) v.push_back(item.value);
    if (v.empty()) return;
    report.aggregate.max = max_value(v);
    report.aggregate.median = median(v);
}

std::string format_number(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace wpsdo
