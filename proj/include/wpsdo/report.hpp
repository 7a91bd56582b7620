#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wpsdo {

enum class Verdict { pass, fail, inconclusive, hypothesis_unverified };

std::string to_string(Verdict v);

using NamedValues = std::vector<std::pair<std::string, double>>;

struct ReportItem {
    std::string id;
    NamedValues params;
    double value = 0.0;
};

struct Aggregate {
    double max = 0.0;
    double median = 0.0;
    double slope = 0.0;
};

// Result of one experiment. The verdict must be recomputable from items,
// aggregate and metrics alone.
struct VerificationReport {
    std::string experiment;
    std::vector<ReportItem> items;
    Aggregate aggregate;
    NamedValues metrics;
    Verdict verdict = Verdict::inconclusive;
    std::string note;
    // Provenance, filled in by the harness.
    std::string config_hash;
    std::uint64_t seed = 0;

    bool passed() const { return verdict == Verdict::pass; }
    double metric(const std::string& name) const;  // throws std::out_of_range
    void set_metric(const std::string& name, double value);
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t count = 0;
};

// Least squares y = slope*x + intercept. Throws with fewer than two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);
double max_value(std::span<const double> values);

// Shortest %g rendering with the given significant digits ("3", "0.25").
std::string format_number(double v, int digits = 12);

// Fills aggregate.max and aggregate.median from item values.
void aggregate_items(VerificationReport& report);

}  // namespace wpsdo
