#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsm {

using Vec = std::vector<double>;

// Precondition violations (bad parameters, points outside the domain).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical infrastructure failures: non-convergence, evaluation budget
// exhaustion. Suites report these separately from mathematical failures.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

// Neumaier compensated accumulator. Grid sums use it so that results are
// reproducible to the last bit for a fixed iteration order.
class Accumulator {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

// Deterministic uniform generator. Mapping the raw 64-bit stream by hand
// keeps the sequence independent of the standard library's distribution
// implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::uint64_t bits() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace hsm
