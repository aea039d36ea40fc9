#include "gtkf/group_testing.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gtkf/errors.hpp"
#include "gtkf/rng.hpp"

namespace gtkf {

BitVector::BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

BitVector BitVector::from_string(const std::string& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw ConfigError("bit string contains '" + std::string(1, bits[i]) + "'");
        }
    }
    return v;
}

void BitVector::set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

std::size_t BitVector::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<std::size_t> BitVector::ones() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        auto word = words_[w];
        while (word != 0) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
            word &= word - 1;
        }
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (test(i)) s[i] = '1';
    }
    return s;
}

bool BitVector::intersects(const BitVector& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (words_[w] & other.words_[w]) return true;
    }
    return false;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

SamplingMatrix::SamplingMatrix(std::size_t tests, std::size_t window, std::size_t sensors, double p)
    : window_(window), sensors_(sensors), p_(p), rows_(tests, BitVector(window * sensors)) {
    if (tests == 0 || window == 0 || sensors == 0) {
        throw ArgumentError("sampling matrix needs T, K, N >= 1");
    }
}

SamplingMatrix SamplingMatrix::identity(std::size_t window, std::size_t sensors) {
    SamplingMatrix m(window * sensors, window, sensors, 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) m.set(j, j);
    return m;
}

SamplingMatrix SamplingMatrix::one_by_one(std::size_t window, std::size_t sensors) {
    SamplingMatrix m(sensors, window, sensors, 0.0);
    for (std::size_t i = 0; i < sensors; ++i) {
        for (std::size_t k = 0; k < window; ++k) m.set(i, column_index(i, k, sensors));
    }
    return m;
}

SamplingMatrix SamplingMatrix::from_rows(std::size_t window, std::size_t sensors,
                                         const std::vector<std::string>& rows, double p) {
    SamplingMatrix m(rows.size(), window, sensors, p);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != m.cols()) {
            throw ConfigError("matrix row " + std::to_string(t + 1) + " has length " + std::to_string(rows[t].size()) +
                              ", expected " + std::to_string(m.cols()));
        }
        m.rows_[t] = BitVector::from_string(rows[t]);
    }
    return m;
}

BitVector SamplingMatrix::column(std::size_t col) const {
    BitVector c(tests());
    for (std::size_t t = 0; t < tests(); ++t) {
        if (get(t, col)) c.set(t);
    }
    return c;
}

SamplingMatrix generate_matrix(std::size_t tests, std::size_t window, std::size_t sensors, double p,
                               std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("sampling probability must lie in [0, 1]");
    }
    SamplingMatrix m(tests, window, sensors, p);
    Rng rng(seed);
    std::bernoulli_distribution coin(p);
    for (std::size_t k = 0; k < window; ++k) {
        for (std::size_t t = 0; t < tests; ++t) {
            for (std::size_t i = 0; i < sensors; ++i) {
                if (coin(rng)) m.set(t, column_index(i, k, sensors));
            }
        }
    }
    return m;
}

OutcomeVector boolean_encode(const SamplingMatrix& phi, const FaultVector& f) {
    if (f.size() != phi.cols()) {
        throw ArgumentError("boolean_encode: fault vector length " + std::to_string(f.size()) +
                            " != matrix columns " + std::to_string(phi.cols()));
    }
    OutcomeVector g(phi.tests());
    for (std::size_t t = 0; t < phi.tests(); ++t) {
        if (phi.row(t).intersects(f)) g.set(t);
    }
    return g;
}

OutcomeVector apply_noise(const OutcomeVector& g, const OutcomeVector& e) {
    if (g.size() != e.size()) {
        throw ArgumentError("apply_noise: length mismatch");
    }
    OutcomeVector out = g;
    out ^= e;
    return out;
}

std::vector<std::size_t> group_at(const SamplingMatrix& phi, std::size_t t, std::size_t k) {
    if (t >= phi.tests() || k >= phi.window()) {
        throw ArgumentError("group_at: test " + std::to_string(t) + " / time " + std::to_string(k) + " out of range");
    }
    std::vector<std::size_t> group;
    const auto base = k * phi.sensors();
    for (std::size_t i = 0; i < phi.sensors(); ++i) {
        if (phi.get(t, base + i)) group.push_back(i);
    }
    return group;
}

namespace {

double binomial(std::size_t n, std::size_t r) {
    if (r > n) return 0.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0));
}

// Is `target` covered by the union of some d-subset of the other columns?
bool covered(const std::vector<BitVector>& cols, std::size_t target, std::size_t d) {
    const auto n = cols.size();
    std::vector<std::size_t> pick;
    pick.reserve(d);
    std::vector<std::uint64_t> acc(cols[target].words().size());

    // Enumerate increasing index tuples, skipping `target`.
    auto recurse = [&](auto&& self, std::size_t start, std::vector<std::uint64_t> uni) -> bool {
        if (pick.size() == d) {
            const auto& tw = cols[target].words();
            for (std::size_t w = 0; w < tw.size(); ++w) {
                if (tw[w] & ~uni[w]) return false;
            }
            return true;
        }
        for (std::size_t c = start; c < n; ++c) {
            if (c == target) continue;
            if (n - c < d - pick.size()) break;
            auto next = uni;
            const auto& cw = cols[c].words();
            for (std::size_t w = 0; w < next.size(); ++w) next[w] |= cw[w];
            pick.push_back(c);
            const bool hit = self(self, c + 1, std::move(next));
            pick.pop_back();
            if (hit) return true;
        }
        return false;
    };
    return recurse(recurse, 0, acc);
}

} // namespace

bool is_d_disjunct(const SamplingMatrix& phi, std::size_t d, double budget) {
    const auto n = phi.cols();
    if (d + 1 > n) {
        throw ArgumentError("is_d_disjunct: d + 1 exceeds the number of columns");
    }
    const double work = binomial(n, d + 1) * static_cast<double>(n);
    if (work > budget) {
        throw BudgetExceeded("is_d_disjunct: C(" + std::to_string(n) + ", " + std::to_string(d + 1) +
                             ") * cols exceeds budget");
    }
    std::vector<BitVector> cols;
    cols.reserve(n);
    for (std::size_t j = 0; j < n; ++j) cols.push_back(phi.column(j));
    for (std::size_t c = 0; c < n; ++c) {
        if (covered(cols, c, d)) return false;
    }
    return true;
}

double expected_chi2_upper_bound(std::size_t tests, std::size_t window, double p, std::size_t sensors) {
    return static_cast<double>(tests) * static_cast<double>(window) *
           (1.0 - std::pow(1.0 - p, static_cast<double>(sensors)));
}

void write_matrix(std::ostream& os, const SamplingMatrix& phi) {
    std::ostringstream p;
    p.precision(17);
    p << phi.p();
    os << phi.tests() << ' ' << phi.window() << ' ' << phi.sensors() << ' ' << p.str() << '\n';
    for (std::size_t t = 0; t < phi.tests(); ++t) os << phi.row(t).to_string() << '\n';
}

SamplingMatrix read_matrix(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) {
        throw ConfigError("matrix file: missing header line");
    }
    std::istringstream hs(header);
    long long t = 0, k = 0, n = 0;
    double p = 0.0;
    if (!(hs >> t >> k >> n >> p) || t < 1 || k < 1 || n < 1) {
        throw ConfigError("matrix file: header must be 'T K N p' with positive T, K, N");
    }
    std::vector<std::string> rows;
    std::string line;
    while (rows.size() < static_cast<std::size_t>(t) && std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    if (rows.size() != static_cast<std::size_t>(t)) {
        throw ConfigError("matrix file: expected " + std::to_string(t) + " rows, found " + std::to_string(rows.size()));
    }
    return SamplingMatrix::from_rows(static_cast<std::size_t>(k), static_cast<std::size_t>(n), rows, p);
}

void write_bits(std::ostream& os, const BitVector& bits) { os << bits.to_string() << '\n'; }

BitVector read_bits(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return BitVector::from_string(line);
    }
    throw ConfigError("bit vector file is empty");
}

} // namespace gtkf
