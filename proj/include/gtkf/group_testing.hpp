// Time-varying group testing over the (sensor x time) grid.
//
// Column convention: zero-based column j of a window refers to sensor
// j % N at zero-based time step j / N, i.e. the K time blocks of N columns
// are laid out consecutively. User-facing text (CSV, CLI) is one-based.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gtkf {

/// Fixed-length bit string packed into 64-bit words. Bits beyond size() are zero.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t size);
    /// Parses a string of '0'/'1' characters.
    static BitVector from_string(const std::string& bits);

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool value = true);
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] bool none() const { return count() == 0; }
    [[nodiscard]] std::vector<std::size_t> ones() const;
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] const std::vector<std::uint64_t>& words() const { return words_; }
    [[nodiscard]] bool intersects(const BitVector& other) const;

    BitVector& operator^=(const BitVector& other);
    friend bool operator==(const BitVector&, const BitVector&) = default;

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Indicator over the K*N (sensor, time) pairs of a window.
using FaultVector = BitVector;
/// One bit per test.
using OutcomeVector = BitVector;

/// T x (K*N) binary test design; block k (columns k*N .. k*N+N-1) is Phi_k.
class SamplingMatrix {
  public:
    SamplingMatrix(std::size_t tests, std::size_t window, std::size_t sensors, double p = 0.0);

    /// Identity design, tests = K*N.
    static SamplingMatrix identity(std::size_t window, std::size_t sensors);
    /// One-by-one design: test i contains sensor i at every time step (tests = N).
    static SamplingMatrix one_by_one(std::size_t window, std::size_t sensors);
    /// Rows given as '0'/'1' strings of length K*N.
    static SamplingMatrix from_rows(std::size_t window, std::size_t sensors, const std::vector<std::string>& rows,
                                    double p = 0.0);

    [[nodiscard]] std::size_t tests() const { return rows_.size(); }
    [[nodiscard]] std::size_t window() const { return window_; }
    [[nodiscard]] std::size_t sensors() const { return sensors_; }
    [[nodiscard]] std::size_t cols() const { return window_ * sensors_; }
    [[nodiscard]] double p() const { return p_; }

    [[nodiscard]] bool get(std::size_t t, std::size_t col) const { return rows_[t].test(col); }
    void set(std::size_t t, std::size_t col, bool value = true) { rows_[t].set(col, value); }
    [[nodiscard]] const BitVector& row(std::size_t t) const { return rows_[t]; }
    [[nodiscard]] BitVector column(std::size_t col) const;

    friend bool operator==(const SamplingMatrix&, const SamplingMatrix&) = default;

  private:
    std::size_t window_;
    std::size_t sensors_;
    double p_;
    std::vector<BitVector> rows_;
};

[[nodiscard]] inline std::size_t column_index(std::size_t sensor, std::size_t time, std::size_t sensors) {
    return time * sensors + sensor;
}

/// Entries i.i.d. Bernoulli(p), drawn time block by time block from a generator seeded with `seed`.
SamplingMatrix generate_matrix(std::size_t tests, std::size_t window, std::size_t sensors, double p,
                               std::uint64_t seed);

/// g_t = OR_j (Phi(t, j) AND f_j).
OutcomeVector boolean_encode(const SamplingMatrix& phi, const FaultVector& f);

/// Elementwise XOR.
OutcomeVector apply_noise(const OutcomeVector& g, const OutcomeVector& e);

/// Sensors selected by test t at time step k (zero-based), ascending.
std::vector<std::size_t> group_at(const SamplingMatrix& phi, std::size_t t, std::size_t k);

/// Brute-force d-disjunctness certificate. Refuses (BudgetExceeded) when
/// C(cols, d+1) * cols exceeds `budget`.
bool is_d_disjunct(const SamplingMatrix& phi, std::size_t d, double budget = 5e8);

/// T * K * (1 - (1 - p)^N): expected number of nonempty groups.
double expected_chi2_upper_bound(std::size_t tests, std::size_t window, double p, std::size_t sensors);

/// Text format: header line "T K N p", then T lines of '0'/'1' of length K*N.
void write_matrix(std::ostream& os, const SamplingMatrix& phi);
SamplingMatrix read_matrix(std::istream& is);

/// Text format for outcome/fault vectors: a single line of '0'/'1'.
void write_bits(std::ostream& os, const BitVector& bits);
BitVector read_bits(std::istream& is);

} // namespace gtkf
