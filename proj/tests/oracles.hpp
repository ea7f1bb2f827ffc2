#pragma once

// Test-side reference implementations, kept deliberately independent of the
// library's computation paths: brute-force scans, reachability closure,
// repeated-squaring limits, power iteration and a closed-form chi-square tail
// built from erfc.

#include <cmath>
#include <cstdint>
#include <random>
#include <streambuf>
#include <string>
#include <vector>

#include "orderflow/markov.hpp"
#include "orderflow/states.hpp"

namespace oracles {

// O(r^2 n) pair tally: for every ordered state pair, scan the sequence.
inline orderflow::CountMatrix brute_pair_counts(const std::vector<orderflow::OrderState>& states) {
  using orderflow::kStateCount;
  orderflow::CountMatrix counts(kStateCount, kStateCount, 0);
  for (std::size_t a = 0; a < kStateCount; ++a) {
    for (std::size_t b = 0; b < kStateCount; ++b) {
      std::uint64_t n = 0;
      for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        if (orderflow::state_index(states[t]) == a && orderflow::state_index(states[t + 1]) == b) {
          ++n;
        }
      }
      counts(a, b) = n;
    }
  }
  return counts;
}

// Floyd-Warshall closure over paths of length >= 1.
inline std::vector<std::vector<bool>> reachability(const orderflow::RealMatrix& p) {
  const std::size_t n = p.rows();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = p(i, j) > 0.0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

// Communicating classes from the closure: i ~ j iff i == j or both
// directions are reachable. Classes sorted by smallest member.
inline std::vector<std::vector<std::size_t>> classes_by_reachability(
    const orderflow::RealMatrix& p) {
  const std::size_t n = p.rows();
  auto reach = reachability(p);
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cls{i};
    assigned[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!assigned[j] && reach[i][j] && reach[j][i]) {
        cls.push_back(j);
        assigned[j] = true;
      }
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

inline orderflow::RealMatrix matmul(const orderflow::RealMatrix& a,
                                    const orderflow::RealMatrix& b) {
  const std::size_t n = a.rows();
  orderflow::RealMatrix c(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

// P^(2^squarings) by repeated squaring; rows converge to pi for ergodic P.
inline orderflow::RealMatrix matrix_power_2k(orderflow::RealMatrix p, int squarings) {
  for (int s = 0; s < squarings; ++s) p = matmul(p, p);
  return p;
}

// Power iteration on pi <- pi P until the sup-norm step is below tol.
inline std::vector<double> power_iteration_pi(const orderflow::RealMatrix& p, double tol = 1e-12,
                                              std::size_t max_iter = 1000000) {
  const std::size_t n = p.rows();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n, 0.0);
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += pi[i] * p(i, j);
      next[j] = v;
    }
    double step = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      step = std::max(step, std::fabs(next[j] - pi[j]));
      sum += next[j];
    }
    for (std::size_t j = 0; j < n; ++j) pi[j] = next[j] / sum;
    if (step < tol) break;
  }
  return pi;
}

// Upper tail of chi-square with k dof via the closed forms: erfc for k = 1,
// the finite Poisson sum for even k, and the half-integer recurrence
// Q(a + 1, u) = Q(a, u) + u^a e^-u / Gamma(a + 1) otherwise.
inline double chi2_upper_tail(double t, int k) {
  double u = t / 2.0;
  if (k % 2 == 0) {
    double term = std::exp(-u);
    double sum = term;
    for (int j = 1; j < k / 2; ++j) {
      term *= u / j;
      sum += term;
    }
    return sum;
  }
  double s = std::erfc(std::sqrt(u));
  for (double a = 0.5; 2.0 * a < k; a += 1.0) {
    s += std::pow(u, a) * std::exp(-u) / std::tgamma(a + 1.0);
  }
  return s;
}

// Seeded random row-stochastic matrix with every entry >= min_entry.
inline orderflow::RealMatrix random_stochastic(std::size_t n, std::uint64_t seed,
                                               double min_entry = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  orderflow::RealMatrix p(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      p(i, j) = min_entry + unit(rng);
      sum += p(i, j);
    }
    double correction = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      p(i, j) /= sum;
      correction += p(i, j);
    }
    p(i, n - 1) += 1.0 - correction;  // force the row sum to 1 exactly
  }
  return p;
}

inline orderflow::TransitionMatrix make_matrix(std::vector<orderflow::OrderState> states,
                                               orderflow::RealMatrix p) {
  orderflow::TransitionMatrix m;
  m.states = std::move(states);
  m.p = std::move(p);
  m.validate();
  return m;
}

inline std::vector<orderflow::OrderState> first_states(std::size_t n) {
  std::vector<orderflow::OrderState> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back(orderflow::kAllStates[i]);
  return states;
}

// Deterministic 10-state chain with the dominant add/delete block, strong
// fill -> opposite-add and add -> same-side-delete edges, and a 0.002 floor.
// Rows are built from one profile plus structured boosts, so the chain is
// strictly positive and ergodic.
inline orderflow::TransitionMatrix structured_market_matrix() {
  using orderflow::OrderState;
  using orderflow::state_index;
  const double profile[10] = {0.25, 0.24, 0.24, 0.22, 0.012, 0.010,
                              0.006, 0.006, 0.004, 0.004};
  orderflow::RealMatrix p(10, 10, 0.0);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) p(i, j) = std::max(profile[j], 0.002);
    p(i, i) += 0.05;
  }
  p(state_index(OrderState::kFillBid), state_index(OrderState::kAddAsk)) += 0.60;
  p(state_index(OrderState::kFillAsk), state_index(OrderState::kAddBid)) += 0.60;
  p(state_index(OrderState::kAddBid), state_index(OrderState::kDeleteBid)) += 0.20;
  p(state_index(OrderState::kAddAsk), state_index(OrderState::kDeleteAsk)) += 0.20;
  for (std::size_t i = 0; i < 10; ++i) {
    double sum = p.row_sum(i);
    double correction = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      p(i, j) /= sum;
      correction += p(i, j);
    }
    p(i, 9) += 1.0 - correction;
  }
  std::vector<orderflow::OrderState> states(orderflow::kAllStates.begin(),
                                            orderflow::kAllStates.end());
  return make_matrix(std::move(states), std::move(p));
}

// Doubly stochastic 10-state chain (weights 1 everywhere, +2 self, +3 next),
// so the stationary law is exactly uniform and every entry is >= 1/15.
inline orderflow::TransitionMatrix rotation_matrix() {
  orderflow::RealMatrix p(10, 10, 0.0);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      double w = 1.0 + (i == j ? 2.0 : 0.0) + (j == (i + 1) % 10 ? 3.0 : 0.0);
      p(i, j) = w / 15.0;
    }
  }
  std::vector<orderflow::OrderState> states(orderflow::kAllStates.begin(),
                                            orderflow::kAllStates.end());
  return make_matrix(std::move(states), std::move(p));
}

// --- synthetic event-log feed ---------------------------------------------

inline const char* kFeedHeader = "DATE,TIMESTAMP,ORDER ID.,EVENT TYPE,TICKER,PRICE,QUANTITY,EXCHANGE\n";

inline void append_synthetic_row(std::string& out, std::size_t i) {
  static const char* kEvents[10] = {"ADD-BID",     "ADD-ASK",     "DELETE-BID", "DELETE-ASK",
                                    "FILL-BID",    "FILL-ASK",    "EXECUTE-BID", "EXECUTE-ASK",
                                    "CANCEL-BID",  "CANCEL-ASK"};
  std::uint32_t ms = static_cast<std::uint32_t>(i % 57'000'000);
  std::uint32_t total_ms = 4u * 3600u * 1000u + ms;
  char buf[96];
  int len = std::snprintf(buf, sizeof(buf), "2018-11-%02u,%02u:%02u:%02u.%03u,%zu,%s,%s,%u.%02u,100,NASDAQ\n",
                          static_cast<unsigned>(5 + (i % 2)), total_ms / 3600000,
                          (total_ms / 60000) % 60, (total_ms / 1000) % 60, total_ms % 1000,
                          i + 1, kEvents[i % 10], (i % 3 == 0) ? "AAPL" : "MSFT",
                          100 + static_cast<unsigned>(i % 7), static_cast<unsigned>(i % 100));
  out.append(buf, static_cast<std::size_t>(len));
}

// Generates rows on the fly so the "file" never exists in memory; the decode
// side sees a stream arbitrarily larger than the buffers it holds.
class SyntheticFeed : public std::streambuf {
 public:
  explicit SyntheticFeed(std::size_t rows) : rows_(rows) {}

  std::size_t bytes_produced() const { return bytes_; }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    buf_.clear();
    if (!header_done_) {
      buf_ = kFeedHeader;
      header_done_ = true;
    }
    while (produced_ < rows_ && buf_.size() < 48 * 1024) {
      append_synthetic_row(buf_, produced_);
      ++produced_;
    }
    if (buf_.empty()) return traits_type::eof();
    bytes_ += buf_.size();
    setg(buf_.data(), buf_.data(), buf_.data() + buf_.size());
    return traits_type::to_int_type(*gptr());
  }

 private:
  std::size_t rows_;
  std::size_t produced_ = 0;
  std::size_t bytes_ = 0;
  bool header_done_ = false;
  std::string buf_;
};

}  // namespace oracles
