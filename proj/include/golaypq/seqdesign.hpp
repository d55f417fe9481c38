#pragma once

// Transmit/receive sequence design: the binary schedule P that picks x or y
// for each PRI, the positive integer receive weights Q, and the signed product
// c_n = (-1)^{p_n} q_n whose zero-Doppler spectral null controls the range
// sidelobes of the cross-ambiguity function.

#include "golaypq/bigint.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace golaypq {

class TransmitSequence {
 public:
  TransmitSequence() = default;
  explicit TransmitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() < 2) throw std::invalid_argument("TransmitSequence: length must be >= 2");
    for (auto b : bits_) {
      if (b > 1) throw std::invalid_argument("TransmitSequence: entries must be 0 or 1");
    }
  }

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t n) const { return bits_[n]; }
  std::uint8_t complement(std::size_t n) const { return static_cast<std::uint8_t>(1 - bits_[n]); }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const TransmitSequence&, const TransmitSequence&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class ReceiveWeights {
 public:
  ReceiveWeights() = default;
  explicit ReceiveWeights(std::vector<BigInt> weights) : weights_(std::move(weights)) {
    if (weights_.size() < 2) throw std::invalid_argument("ReceiveWeights: length must be >= 2");
    for (const auto& w : weights_) {
      if (w <= 0) throw std::invalid_argument("ReceiveWeights: weights must be strictly positive");
    }
  }

  static ReceiveWeights from_int64(std::span<const std::int64_t> w) {
    return ReceiveWeights(std::vector<BigInt>(w.begin(), w.end()));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const BigInt& operator[](std::size_t n) const { return weights_[n]; }
  const std::vector<BigInt>& weights() const noexcept { return weights_; }

  BigInt l1() const {
    BigInt s = 0;
    for (const auto& w : weights_) s += w;
    return s;
  }
  BigInt l2_squared() const {
    BigInt s = 0;
    for (const auto& w : weights_) s += w * w;
    return s;
  }
  std::vector<double> as_double() const {
    std::vector<double> out;
    out.reserve(weights_.size());
    for (const auto& w : weights_) out.push_back(to_double(w));
    return out;
  }

  friend bool operator==(const ReceiveWeights&, const ReceiveWeights&) = default;

 private:
  std::vector<BigInt> weights_;
};

/// c_n = (-1)^{p_n} q_n.
class SignedProduct {
 public:
  SignedProduct() = default;
  explicit SignedProduct(std::vector<BigInt> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("SignedProduct: length must be >= 2");
  }
  SignedProduct(const TransmitSequence& p, const ReceiveWeights& q) {
    if (p.size() != q.size()) {
      throw std::invalid_argument("SignedProduct: P has length " + std::to_string(p.size()) +
                                  " but Q has length " + std::to_string(q.size()));
    }
    values_.reserve(p.size());
    for (std::size_t n = 0; n < p.size(); ++n) values_.push_back(p[n] ? BigInt(-q[n]) : q[n]);
  }
  static SignedProduct from_int64(std::span<const std::int64_t> c) {
    return SignedProduct(std::vector<BigInt>(c.begin(), c.end()));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const BigInt& operator[](std::size_t n) const { return values_[n]; }
  const std::vector<BigInt>& values() const noexcept { return values_; }

  bool has_zero() const {
    return std::any_of(values_.begin(), values_.end(), [](const BigInt& v) { return v == 0; });
  }

  // Requires every entry nonzero; p_n = 1 where c_n < 0.
  TransmitSequence transmit() const {
    if (has_zero()) throw std::domain_error("SignedProduct: zero entry has no sign");
    std::vector<std::uint8_t> bits;
    bits.reserve(values_.size());
    for (const auto& v : values_) bits.push_back(v < 0 ? 1 : 0);
    return TransmitSequence(std::move(bits));
  }
  ReceiveWeights receive() const {
    std::vector<BigInt> q;
    q.reserve(values_.size());
    for (const auto& v : values_) q.push_back(abs(v));
    return ReceiveWeights(std::move(q));
  }

  friend bool operator==(const SignedProduct&, const SignedProduct&) = default;

 private:
  std::vector<BigInt> values_;
};

struct Design {
  std::string label;
  TransmitSequence p;
  ReceiveWeights q;

  std::size_t size() const noexcept { return p.size(); }
  SignedProduct product() const { return SignedProduct(p, q); }
};

struct DesignReport {
  std::string label;
  std::size_t length = 0;
  int null_order = -1;  // -1: the m = 0 moment is already nonzero
  Rational snr_ratio;
};

// ---------------------------------------------------------------------------
// Sequence constructors

/// Prouhet-Thue-Morse prefix: p_0 = 0, p_{2k} = p_k, p_{2k+1} = 1 - p_k.
inline TransmitSequence ptm_sequence(std::size_t n) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw std::invalid_argument("ptm_sequence: length " + std::to_string(n) +
                                " is not a power of two >= 2");
  }
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t k = 1; k < n; ++k) {
    bits[k] = (k % 2 == 0) ? bits[k / 2] : static_cast<std::uint8_t>(1 - bits[k / 2]);
  }
  return TransmitSequence(std::move(bits));
}

/// p_n = 1 for even n, 0 for odd n (x, y, x, y, ...).
inline TransmitSequence alternating_sequence(std::size_t n) {
  if (n < 2) throw std::invalid_argument("alternating_sequence: length must be >= 2");
  std::vector<std::uint8_t> bits(n);
  for (std::size_t k = 0; k < n; ++k) bits[k] = (k % 2 == 0) ? 1 : 0;
  return TransmitSequence(std::move(bits));
}

/// q_n = C(N-1, n), exact.
inline ReceiveWeights binomial_weights(std::size_t n) {
  if (n < 2) throw std::invalid_argument("binomial_weights: length must be >= 2");
  std::vector<BigInt> row{1};
  for (std::size_t r = 1; r < n; ++r) {
    std::vector<BigInt> next(r + 1);
    next.front() = 1;
    next.back() = 1;
    for (std::size_t k = 1; k < r; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  return ReceiveWeights(std::move(row));
}

inline ReceiveWeights constant_weights(std::size_t n) {
  if (n < 2) throw std::invalid_argument("constant_weights: length must be >= 2");
  return ReceiveWeights(std::vector<BigInt>(n, BigInt(1)));
}

/// Alternating x/y transmission with a matched (all-ones) receiver.
inline Design conventional_design(std::size_t n) {
  return {"conventional", alternating_sequence(n), constant_weights(n)};
}
inline Design ptm_design(std::size_t n) { return {"ptm", ptm_sequence(n), constant_weights(n)}; }
inline Design binomial_design(std::size_t n) {
  return {"binomial", alternating_sequence(n), binomial_weights(n)};
}

// ---------------------------------------------------------------------------
// Spectral-null certification

/// sum_n (n + offset)^m c_n.
inline BigInt moment(const SignedProduct& c, unsigned m, unsigned offset = 0) {
  BigInt acc = 0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    acc += boost::multiprecision::pow(BigInt(n + offset), m) * c[n];
  }
  return acc;
}

/// Largest M with sum_n n^m c_n = 0 for all m = 0..M; -1 if the sum of c is
/// nonzero. A nonzero length-N sequence cannot exceed N - 2.
inline int null_order(const SignedProduct& c) {
  if (c.size() < 2) throw std::invalid_argument("null_order: length must be >= 2");
  const int cap = static_cast<int>(c.size()) - 2;
  int order = -1;
  for (int m = 0; m <= cap; ++m) {
    if (moment(c, static_cast<unsigned>(m)) != 0) break;
    order = m;
  }
  return order;
}

/// True iff the (M+1) x N matrix with rows [1^m, 2^m, ..., N^m] annihilates c.
inline bool vandermonde_check(const SignedProduct& c, int order) {
  const auto n = static_cast<int>(c.size());
  if (order < 0) throw std::invalid_argument("vandermonde_check: order must be >= 0");
  if (order >= n - 1) {
    throw std::invalid_argument("vandermonde_check: order " + std::to_string(order) +
                                " must be below N-1 = " + std::to_string(n - 1) +
                                " (only the trivial solution exists otherwise)");
  }
  for (int m = 0; m <= order; ++m) {
    if (moment(c, static_cast<unsigned>(m), 1) != 0) return false;
  }
  return true;
}

/// Shifted (M+1)-th order difference patterns b^{(s)}_n = (-1)^{n-s} C(M+1, n-s),
/// s = 0..N-M-2. They form a lattice basis of all integer solutions of the
/// order-M null condition: c(z) = sum c_n z^n must be divisible by (z-1)^{M+1}.
inline std::vector<std::vector<std::int64_t>> difference_basis(std::size_t n, int order) {
  if (order < 0) throw std::invalid_argument("difference_basis: order must be >= 0");
  if (static_cast<std::size_t>(order) + 1 >= n) {
    throw std::invalid_argument("difference_basis: order " + std::to_string(order) +
                                " must be below N-1 = " + std::to_string(n - 1));
  }
  if (order > 60) throw std::invalid_argument("difference_basis: order above 60 overflows 64-bit patterns");
  const auto width = static_cast<std::size_t>(order) + 2;
  std::vector<std::int64_t> pattern(width);
  std::int64_t binom = 1;
  for (std::size_t j = 0; j < width; ++j) {
    pattern[j] = (j % 2 == 0) ? binom : -binom;
    binom = binom * static_cast<std::int64_t>(width - 1 - j) / static_cast<std::int64_t>(j + 1);
  }
  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t s = 0; s + width <= n; ++s) {
    std::vector<std::int64_t> row(n, 0);
    std::copy(pattern.begin(), pattern.end(), row.begin() + static_cast<std::ptrdiff_t>(s));
    basis.push_back(std::move(row));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// SNR

/// ||q||_1^2 / ||q||_2^2, the design-dependent factor of the output SNR.
/// Equals N exactly when q is constant.
inline Rational snr_ratio(const ReceiveWeights& q) {
  const BigInt l1 = q.l1();
  return Rational(l1 * l1, q.l2_squared());
}

/// N0 * L * ||q||_2^2.
inline double output_noise_power(const ReceiveWeights& q, double noise_power, std::size_t chips) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("output_noise_power: N0 must be positive");
  return noise_power * static_cast<double>(chips) * to_double(q.l2_squared());
}

inline DesignReport report_for(const Design& d) {
  return {d.label, d.size(), null_order(d.product()), snr_ratio(d.q)};
}

// ---------------------------------------------------------------------------
// Max-SNR search

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchResult {
  Design design;
  DesignReport report;
  std::uint64_t leaves_evaluated = 0;
  std::uint64_t nodes_visited = 0;
  bool certified_optimal = false;  // true when the result is provably the global max over all integer designs
  std::string strategy;
  int coeff_bound = 0;
};

inline unsigned thread_budget(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GOLAY_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

using Wide = __int128;

// Canonical integer design: gcd divided out, c_0 < 0 (so p_0 = 1, matching the
// alternating schedule that starts with x).
inline std::vector<std::int64_t> canonicalize(std::vector<std::int64_t> c) {
  std::int64_t g = 0;
  for (auto v : c) g = std::gcd(g, v < 0 ? -v : v);
  if (g > 1) {
    for (auto& v : c) v /= g;
  }
  if (!c.empty() && c.front() > 0) {
    for (auto& v : c) v = -v;
  }
  return c;
}

struct Candidate {
  bool valid = false;
  std::int64_t sum_abs = 0;
  std::int64_t sum_sq = 1;
  std::vector<std::int64_t> c;  // canonical

  // Strictly better: larger ratio, then lexicographically smaller |c|.
  bool better_than(const Candidate& o) const {
    if (!valid) return false;
    if (!o.valid) return true;
    const Wide lhs = Wide(sum_abs) * sum_abs * o.sum_sq;
    const Wide rhs = Wide(o.sum_abs) * o.sum_abs * sum_sq;
    if (lhs != rhs) return lhs > rhs;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto a = c[i] < 0 ? -c[i] : c[i];
      const auto b = o.c[i] < 0 ? -o.c[i] : o.c[i];
      if (a != b) return a < b;
    }
    return false;
  }
};

class LatticeSearch {
 public:
  LatticeSearch(std::size_t n, int order, int bound)
      : n_(n), width_(static_cast<std::size_t>(order) + 2), dims_(n - width_ + 1), bound_(bound) {
    const auto basis = difference_basis(n, order);
    pattern_.assign(basis.front().begin(), basis.front().begin() + static_cast<std::ptrdiff_t>(width_));
  }

  std::size_t dims() const { return dims_; }

  // Explores the subtree with u_0 = first.
  void run(int first, Candidate& best, std::uint64_t& leaves, std::uint64_t& nodes) const {
    std::vector<std::int64_t> c(n_, 0);
    std::vector<int> u(dims_, 0);
    u[0] = first;
    add(c, 0, first);
    descend(1, c, u, best, leaves, nodes);
  }

 private:
  void add(std::vector<std::int64_t>& c, std::size_t s, std::int64_t coeff) const {
    for (std::size_t j = 0; j < width_; ++j) c[s + j] += coeff * pattern_[j];
  }

  // Entries c_0..c_{depth-1} are final once u_0..u_{depth-1} are fixed.
  void descend(std::size_t depth, std::vector<std::int64_t>& c, std::vector<int>& u, Candidate& best,
               std::uint64_t& leaves, std::uint64_t& nodes) const {
    ++nodes;
    const std::size_t fixed = (depth == dims_) ? n_ : depth;
    std::int64_t s1 = 0;
    std::int64_t s2 = 0;
    for (std::size_t i = 0; i < fixed; ++i) {
      if (c[i] == 0) return;  // q_n must be strictly positive
      s1 += c[i] < 0 ? -c[i] : c[i];
      s2 += c[i] * c[i];
    }
    if (best.valid) {
      // Cauchy-Schwarz: completions cannot beat s1^2/s2 + remaining.
      const auto remaining = static_cast<std::int64_t>(n_ - fixed);
      const Wide lhs = (Wide(s1) * s1 + Wide(remaining) * s2) * best.sum_sq;
      const Wide rhs = Wide(best.sum_abs) * best.sum_abs * s2;
      if (lhs < rhs) return;
    }
    if (depth == dims_) {
      ++leaves;
      Candidate cand;
      cand.valid = true;
      cand.c = canonicalize(c);
      cand.sum_abs = 0;
      cand.sum_sq = 0;
      for (auto v : cand.c) {
        cand.sum_abs += v < 0 ? -v : v;
        cand.sum_sq += v * v;
      }
      if (cand.better_than(best)) best = std::move(cand);
      return;
    }
    for (int v = -bound_; v <= bound_; ++v) {
      u[depth] = v;
      if (v != 0) add(c, depth, v);
      descend(depth + 1, c, u, best, leaves, nodes);
      if (v != 0) add(c, depth, -v);
    }
    u[depth] = 0;
  }

  std::size_t n_;
  std::size_t width_;
  std::size_t dims_;
  int bound_;
  std::vector<std::int64_t> pattern_;
};

inline SearchResult finish(const std::vector<std::int64_t>& c, std::string label, std::string strategy) {
  SignedProduct product = SignedProduct::from_int64(c);
  Design design{std::move(label), product.transmit(), product.receive()};
  SearchResult result{design, report_for(design), 0, 0, false, std::move(strategy), 0};
  return result;
}

}  // namespace detail

/// Bounded exhaustive search over c = sum_s u_s b^{(s)} with |u_s| <= bound,
/// maximizing ||q||_1^2/||q||_2^2 among candidates with no zero entry.
/// Branches are cut when a zero entry is fixed or when the Cauchy-Schwarz
/// bound on any completion falls strictly below the incumbent. The outcome is
/// independent of the thread count.
inline SearchResult max_snr_search(std::size_t n, int order, int coeff_bound, unsigned threads = 0) {
  if (coeff_bound < 1) throw std::invalid_argument("max_snr_search: coefficient bound must be >= 1");
  if (order < 0 || static_cast<std::size_t>(order) + 1 >= n) {
    throw std::invalid_argument("max_snr_search: order " + std::to_string(order) +
                                " must satisfy 0 <= M < N-1 = " + std::to_string(n - 1));
  }
  // |c_n| <= bound * 2^{M+1}; keep every partial sum inside 64 bits and every
  // product used in comparisons inside 128 bits.
  const double magnitude = static_cast<double>(n) * coeff_bound * std::ldexp(1.0, order + 1);
  if (magnitude * magnitude > 1e18) {
    throw std::invalid_argument("max_snr_search: N * bound * 2^(M+1) too large for exact 64-bit search");
  }

  const detail::LatticeSearch search(n, order, coeff_bound);
  // u_0 = c_0 must be nonzero; canonical designs have c_0 < 0.
  std::vector<int> roots;
  for (int v = -coeff_bound; v <= -1; ++v) roots.push_back(v);

  const unsigned workers = std::min<unsigned>(thread_budget(threads), static_cast<unsigned>(roots.size()));
  std::vector<detail::Candidate> best(roots.size());
  std::vector<std::uint64_t> leaves(roots.size(), 0);
  std::vector<std::uint64_t> nodes(roots.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < roots.size(); i = next++) search.run(roots[i], best[i], leaves[i], nodes[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  detail::Candidate overall;
  for (auto& b : best) {
    if (b.better_than(overall)) overall = b;
  }
  if (!overall.valid) {
    throw InfeasibleError("max_snr_search: no design with strictly positive weights and null order >= " +
                          std::to_string(order) + " exists within coefficient bound " +
                          std::to_string(coeff_bound) + " at N = " + std::to_string(n));
  }
  SearchResult result = detail::finish(overall.c, "maxsnr", "lattice");
  result.coeff_bound = coeff_bound;
  result.leaves_evaluated = std::accumulate(leaves.begin(), leaves.end(), std::uint64_t{0});
  result.nodes_visited = std::accumulate(nodes.begin(), nodes.end(), std::uint64_t{0});
  return result;
}

namespace detail {

// Solves G y = w exactly.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> g, std::vector<Rational> w) {
  const std::size_t k = w.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && g[piv][col] == 0) ++piv;
    if (piv == k) throw std::domain_error("solve_exact: singular system");
    std::swap(g[piv], g[col]);
    std::swap(w[piv], w[col]);
    for (std::size_t r = col + 1; r < k; ++r) {
      if (g[r][col] == 0) continue;
      const Rational f = g[r][col] / g[col][col];
      for (std::size_t j = col; j < k; ++j) g[r][j] -= f * g[col][j];
      w[r] -= f * w[col];
    }
  }
  std::vector<Rational> y(k);
  for (std::size_t r = k; r-- > 0;) {
    Rational acc = w[r];
    for (std::size_t j = r + 1; j < k; ++j) acc -= g[r][j] * y[j];
    y[r] = acc / g[r][r];
  }
  return y;
}

}  // namespace detail

/// Exact global maximum of ||q||_1^2/||q||_2^2 over all positive-integer
/// designs with null order >= M.
///
/// For a fixed sign pattern s, the ratio of any null-space vector c with
/// sign(c) = s is (s.c)^2/||c||^2 <= ||Proj s||^2, with equality at
/// c = Proj s (Proj: orthogonal projector onto the integer null space). That
/// point is rational, so an integer multiple realizes it. The search screens
/// all 2^{N-1} patterns in floating point, then rebuilds the winner exactly.
/// The result is certified optimal when no sign-inconsistent pattern has a
/// larger projection norm than the winner.
inline SearchResult max_snr_exact(std::size_t n, int order) {
  if (order < 0 || static_cast<std::size_t>(order) + 1 >= n) {
    throw std::invalid_argument("max_snr_exact: order " + std::to_string(order) +
                                " must satisfy 0 <= M < N-1 = " + std::to_string(n - 1));
  }
  if (n > 26) throw std::invalid_argument("max_snr_exact: sign-pattern enumeration limited to N <= 26");
  const auto basis = difference_basis(n, order);
  const std::size_t k = basis.size();

  // Gram matrix and its Cholesky factor for screening.
  std::vector<std::vector<double>> chol(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<std::int64_t>> gram(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc += basis[a][i] * basis[b][i];
      gram[a][b] = acc;
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double acc = static_cast<double>(gram[a][b]);
      for (std::size_t j = 0; j < b; ++j) acc -= chol[a][j] * chol[b][j];
      chol[a][b] = (a == b) ? std::sqrt(acc) : acc / chol[b][b];
    }
  }
  auto solve = [&](std::vector<double> w) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t j = 0; j < a; ++j) w[a] -= chol[a][j] * w[j];
      w[a] /= chol[a][a];
    }
    for (std::size_t a = k; a-- > 0;) {
      for (std::size_t j = a + 1; j < k; ++j) w[a] -= chol[j][a] * w[j];
      w[a] /= chol[a][a];
    }
    return w;
  };

  struct Screened {
    double value;
    std::uint64_t mask;
  };
  std::vector<Screened> consistent;
  double best_inconsistent = -1.0;
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  std::vector<double> sign(n), w(k), c(n);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    sign[0] = -1.0;  // canonical c_0 < 0
    for (std::size_t i = 1; i < n; ++i) sign[i] = ((mask >> (i - 1)) & 1u) ? -1.0 : 1.0;
    for (std::size_t a = 0; a < k; ++a) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(basis[a][i]) * sign[i];
      w[a] = acc;
    }
    const auto y = solve(w);
    double value = 0.0;
    for (std::size_t a = 0; a < k; ++a) value += w[a] * y[a];
    bool agrees = true;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a < k; ++a) acc += static_cast<double>(basis[a][i]) * y[a];
      c[i] = acc;
      scale = std::max(scale, std::abs(acc));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(c[i] * sign[i] > 1e-9 * scale)) agrees = false;
    }
    if (agrees) {
      consistent.push_back({value, mask});
    } else {
      best_inconsistent = std::max(best_inconsistent, value);
    }
  }
  std::sort(consistent.begin(), consistent.end(),
            [](const Screened& a, const Screened& b) { return a.value > b.value || (a.value == b.value && a.mask < b.mask); });

  std::vector<std::vector<Rational>> gram_exact(k, std::vector<Rational>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) gram_exact[a][b] = Rational(gram[a][b]);
  }
  for (const auto& cand : consistent) {
    std::vector<std::int64_t> s(n);
    s[0] = -1;
    for (std::size_t i = 1; i < n; ++i) s[i] = ((cand.mask >> (i - 1)) & 1u) ? -1 : 1;
    std::vector<Rational> wr(k);
    for (std::size_t a = 0; a < k; ++a) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc += basis[a][i] * s[i];
      wr[a] = Rational(acc);
    }
    const auto y = detail::solve_exact(gram_exact, wr);
    std::vector<Rational> cr(n);
    BigInt lcm = 1;
    for (std::size_t i = 0; i < n; ++i) {
      Rational acc = 0;
      for (std::size_t a = 0; a < k; ++a) acc += Rational(basis[a][i]) * y[a];
      cr[i] = acc;
      lcm = boost::multiprecision::lcm(lcm, denominator_of(acc));
    }
    std::vector<BigInt> ci(n);
    BigInt g = 0;
    bool agrees = true;
    for (std::size_t i = 0; i < n; ++i) {
      ci[i] = numerator_of(cr[i] * Rational(lcm));
      g = boost::multiprecision::gcd(g, BigInt(abs(ci[i])));
      if (ci[i] == 0 || (ci[i] < 0) != (s[i] < 0)) agrees = false;
    }
    if (!agrees) continue;
    for (auto& v : ci) v /= g;
    SignedProduct product(std::move(ci));
    Design design{"maxsnr", product.transmit(), product.receive()};
    SearchResult result{design, report_for(design), patterns, patterns, false, "exact", 0};
    if (result.report.null_order < order) continue;  // cannot happen for a true projection
    result.certified_optimal = best_inconsistent <= to_double(result.report.snr_ratio) * (1.0 + 1e-9);
    return result;
  }
  throw InfeasibleError("max_snr_exact: no sign pattern admits a positive-weight design with null order >= " +
                        std::to_string(order) + " at N = " + std::to_string(n));
}

}  // namespace golaypq
