#include "orderflow/markov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "orderflow/errors.hpp"
#include "orderflow/incomplete_gamma.hpp"

namespace orderflow {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kResidualTol = 1e-10;

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  }
  return out;
}

// Iterative Tarjan strongly-connected components over edges p_ij > 0.
// Classes come back sorted by their smallest state index.
std::vector<std::vector<std::size_t>> strongly_connected_components(const RealMatrix& p) {
  const std::size_t n = p.rows();
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> classes;
  int next_index = 0;

  struct Frame {
    std::size_t v;
    std::size_t next_child;
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call_stack{{root, 0}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      std::size_t v = frame.v;
      bool descended = false;
      while (frame.next_child < n) {
        std::size_t w = frame.next_child++;
        if (p(v, w) <= 0.0) continue;
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;

      if (lowlink[v] == index[v]) {
        std::vector<std::size_t> component;
        while (true) {
          std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
          if (w == v) break;
        }
        std::sort(component.begin(), component.end());
        classes.push_back(std::move(component));
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        lowlink[call_stack.back().v] = std::min(lowlink[call_stack.back().v], lowlink[v]);
      }
    }
  }

  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;
}

// Period of one communicating class: gcd of (level[u] + 1 - level[v]) over
// internal edges of a breadth-first traversal from the class's first state.
// 0 when the class has no internal edge (no return path).
int class_period(const RealMatrix& p, const std::vector<std::size_t>& members) {
  const std::size_t n = p.rows();
  std::vector<bool> in_class(n, false);
  for (std::size_t s : members) in_class[s] = true;

  std::vector<long> level(n, -1);
  std::vector<std::size_t> queue{members.front()};
  level[members.front()] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t u = queue[head];
    for (std::size_t v = 0; v < n; ++v) {
      if (p(u, v) <= 0.0 || !in_class[v]) continue;
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }

  long g = 0;
  for (std::size_t u : members) {
    for (std::size_t v : members) {
      if (p(u, v) > 0.0) g = std::gcd(g, level[u] + 1 - level[v]);
    }
  }
  return static_cast<int>(g);
}

}  // namespace

TransitionCounts TransitionCounts::zero(std::span<const OrderState> states) {
  TransitionCounts out;
  out.states.assign(states.begin(), states.end());
  out.counts = CountMatrix(states.size(), states.size(), 0);
  return out;
}

void TransitionMatrix::validate() const {
  if (states.size() != p.rows() || p.rows() != p.cols()) {
    throw Error(Errc::not_row_stochastic, "matrix shape does not match state list");
  }
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
      double v = p(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(Errc::not_row_stochastic, "entry outside [0, 1]");
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kRowSumTol) {
      throw Error(Errc::not_row_stochastic,
                  "row " + std::string(state_code(states[i])) + " sums to " + std::to_string(sum));
    }
  }
}

TransitionCounts count_transitions(const StateSequence& seq) {
  if (seq.length() < 2) {
    throw Error(Errc::sequence_too_short,
                "sequence of length " + std::to_string(seq.length()) + " has no transitions");
  }
  TransitionCounts out = TransitionCounts::zero(kAllStates);
  for (std::size_t t = 0; t + 1 < seq.states.size(); ++t) {
    out.counts(state_index(seq.states[t]), state_index(seq.states[t + 1])) += 1;
  }
  return out;
}

TransitionCounts pool_counts(std::span<const TransitionCounts> parts) {
  if (parts.empty()) return TransitionCounts::zero(kAllStates);
  TransitionCounts out = TransitionCounts::zero(parts.front().states);
  for (const TransitionCounts& part : parts) {
    if (part.states != out.states) {
      throw Error(Errc::state_set_mismatch, "pooled parts use different state lists");
    }
    for (std::size_t i = 0; i < out.counts.rows(); ++i) {
      for (std::size_t j = 0; j < out.counts.cols(); ++j) out.counts(i, j) += part.counts(i, j);
    }
  }
  return out;
}

TransitionMatrix fit_mle(const TransitionCounts& counts) {
  const std::size_t n = counts.states.size();
  std::vector<bool> keep(n, true);

  // Dropping a never-sourced state removes its column too, which can zero
  // out another row; iterate to a fixed point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!keep[i]) continue;
      std::uint64_t row_sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (keep[j]) row_sum += counts.counts(i, j);
      }
      if (row_sum == 0) {
        keep[i] = false;
        changed = true;
      }
    }
  }

  std::vector<std::size_t> kept;
  TransitionMatrix out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) {
      kept.push_back(i);
      out.states.push_back(counts.states[i]);
    } else {
      out.removed_states.push_back(counts.states[i]);
    }
  }
  if (kept.empty()) {
    throw Error(Errc::empty_counts, "every state has zero transition count");
  }

  const std::size_t r = kept.size();
  out.p = RealMatrix(r, r, 0.0);
  for (std::size_t a = 0; a < r; ++a) {
    std::uint64_t row_sum = 0;
    for (std::size_t b = 0; b < r; ++b) row_sum += counts.counts(kept[a], kept[b]);
    for (std::size_t b = 0; b < r; ++b) {
      out.p(a, b) = static_cast<double>(counts.counts(kept[a], kept[b])) /
                    static_cast<double>(row_sum);
    }
  }
  return out;
}

ChiSquareResult chi_square_test(const TransitionCounts& counts, double alpha) {
  const std::size_t n = counts.states.size();
  const std::uint64_t total = counts.total();
  if (total == 0) throw Error(Errc::empty_counts, "no transitions observed");

  std::vector<std::uint64_t> row(n, 0), col(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row[i] += counts.counts(i, j);
      col[j] += counts.counts(i, j);
    }
  }

  std::size_t r_eff = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (row[i] > 0 || col[i] > 0) ++r_eff;
  }

  ChiSquareResult result;
  result.expected = RealMatrix(n, n, 0.0);
  result.alpha = alpha;
  for (std::size_t i = 0; i < n; ++i) {
    if (row[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (col[j] == 0) continue;
      double e = static_cast<double>(row[i]) * static_cast<double>(col[j]) /
                 static_cast<double>(total);
      result.expected(i, j) = e;
      if (e < 5.0) ++result.low_expected_cells;
      double d = static_cast<double>(counts.counts(i, j)) - e;
      result.statistic += d * d / e;
    }
  }

  result.dof = r_eff >= 2 ? static_cast<int>((r_eff - 1) * (r_eff - 1)) : 0;
  result.p_value = result.dof > 0
                       ? chi_square_upper_tail(result.statistic, static_cast<double>(result.dof))
                       : 1.0;
  result.reject_null = result.p_value < alpha;
  return result;
}

ChainStructure classify_structure(const TransitionMatrix& matrix) {
  matrix.validate();
  const std::size_t n = matrix.order();

  ChainStructure s;
  s.communicating_classes = strongly_connected_components(matrix.p);
  s.class_of.assign(n, 0);
  for (std::size_t c = 0; c < s.communicating_classes.size(); ++c) {
    for (std::size_t v : s.communicating_classes[c]) s.class_of[v] = c;
  }
  s.irreducible = s.communicating_classes.size() == 1;

  s.periods.assign(n, 0);
  s.recurrent.assign(n, false);
  for (const auto& members : s.communicating_classes) {
    int period = class_period(matrix.p, members);
    bool closed = true;
    for (std::size_t u : members) {
      for (std::size_t v = 0; v < n; ++v) {
        if (matrix.p(u, v) > 0.0 && s.class_of[v] != s.class_of[u]) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    for (std::size_t u : members) {
      s.periods[u] = period;
      s.recurrent[u] = closed;
    }
  }

  s.aperiodic = std::all_of(s.periods.begin(), s.periods.end(), [](int p) { return p <= 1; });
  s.ergodic = s.irreducible && s.aperiodic;
  return s;
}

StationaryDistribution stationary_distribution(const TransitionMatrix& matrix,
                                               const ChainStructure& structure) {
  matrix.validate();
  if (!structure.ergodic) {
    throw Error(Errc::not_ergodic, "stationary distribution requires an ergodic chain");
  }
  const std::size_t n = matrix.order();

  // (P^T - I) pi = 0 with the last equation swapped for sum(pi) = 1.
  Eigen::MatrixXd a = to_eigen(matrix.p).transpose();
  for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= 1.0;
  a.row(static_cast<Eigen::Index>(n - 1)).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  b(static_cast<Eigen::Index>(n - 1)) = 1.0;

  Eigen::VectorXd x = a.partialPivLu().solve(b);

  StationaryDistribution out;
  out.pi.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = x(static_cast<Eigen::Index>(i));
    if (!std::isfinite(v)) throw Error(Errc::singular_system, "linear solve produced non-finite pi");
    out.pi[i] = std::max(v, 0.0);
    sum += out.pi[i];
  }
  if (sum <= 0.0) throw Error(Errc::singular_system, "linear solve produced non-positive mass");
  for (double& v : out.pi) v /= sum;

  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double pj = 0.0;
    for (std::size_t i = 0; i < n; ++i) pj += out.pi[i] * matrix.p(i, j);
    residual = std::max(residual, std::fabs(pj - out.pi[j]));
  }
  if (residual >= kResidualTol) {
    throw Error(Errc::singular_system, "pi P = pi residual " + std::to_string(residual));
  }
  return out;
}

std::vector<double> mean_recurrence_times(const StationaryDistribution& pi) {
  std::vector<double> out(pi.pi.size());
  for (std::size_t j = 0; j < pi.pi.size(); ++j) {
    if (pi.pi[j] <= 0.0) {
      throw Error(Errc::zero_stationary_mass, "pi_" + std::to_string(j) + " is not positive");
    }
    out[j] = 1.0 / pi.pi[j];
  }
  return out;
}

SpectralSummary spectral_summary(const TransitionMatrix& matrix) {
  matrix.validate();
  const std::size_t n = matrix.order();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(matrix.p), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::no_convergence, "eigenvalue iteration did not converge");
  }

  SpectralSummary out;
  out.eigenvalues.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues.push_back(solver.eigenvalues()(static_cast<Eigen::Index>(i)));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              double ma = std::abs(a), mb = std::abs(b);
              if (ma != mb) return ma > mb;
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });

  // Exclude the single eigenvalue closest to 1; the rest compete for the slem.
  std::size_t unit_idx = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::abs(out.eigenvalues[i] - std::complex<double>(1.0, 0.0));
    if (d < best) {
      best = d;
      unit_idx = i;
    }
  }
  out.slem = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != unit_idx) out.slem = std::max(out.slem, std::abs(out.eigenvalues[i]));
  }
  out.gap_absolute = 1.0 - out.slem;

  if (n >= 2) {
    std::vector<double> real_parts(n);
    for (std::size_t i = 0; i < n; ++i) real_parts[i] = out.eigenvalues[i].real();
    std::sort(real_parts.begin(), real_parts.end(), std::greater<>());
    out.gap = 1.0 - real_parts[1];
  } else {
    out.gap = 1.0;
  }

  out.relaxation_time = 1.0 / out.gap_absolute;
  return out;
}

EntropyRateResult entropy_rate(const TransitionMatrix& matrix, const StationaryDistribution& pi) {
  matrix.validate();
  const std::size_t n = matrix.order();
  EntropyRateResult out;
  out.max_bits = std::log2(static_cast<double>(n));
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double p = matrix.p(i, j);
      if (p > 0.0) h -= pi.pi[i] * p * std::log2(p);
    }
  }
  out.bits_per_step = h;
  return out;
}

ChainAnalytics analyze_chain(const TransitionMatrix& matrix) {
  ChainAnalytics a;
  a.structure = classify_structure(matrix);
  if (!a.structure.ergodic) {
    throw Error(Errc::not_ergodic, "chain is not ergodic");
  }
  a.pi = stationary_distribution(matrix, a.structure);
  a.mean_recurrence = mean_recurrence_times(a.pi);
  a.spectral = spectral_summary(matrix);
  a.entropy = entropy_rate(matrix, a.pi);
  return a;
}

}  // namespace orderflow
