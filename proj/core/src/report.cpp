#include "orderflow/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "orderflow/csv.hpp"
#include "orderflow/errors.hpp"

namespace orderflow {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// Table-IV-style rendering: sub-millesimal probabilities print as "<0.001".
std::string stationary_cell(double v) { return v < 0.001 ? "<0.001" : fixed(v, 3); }

// Averages the per-day fitted matrices over the full alphabet, then
// renormalises and drops never-sourced states the same way fit_mle does.
TransitionMatrix mean_of_matrices(std::span<const TransitionMatrix> parts) {
  RealMatrix sum(kStateCount, kStateCount, 0.0);
  for (const TransitionMatrix& part : parts) {
    for (std::size_t a = 0; a < part.order(); ++a) {
      for (std::size_t b = 0; b < part.order(); ++b) {
        sum(state_index(part.states[a]), state_index(part.states[b])) += part.p(a, b);
      }
    }
  }

  std::vector<bool> keep(kStateCount, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < kStateCount; ++i) {
      if (!keep[i]) continue;
      double row = 0.0;
      for (std::size_t j = 0; j < kStateCount; ++j) {
        if (keep[j]) row += sum(i, j);
      }
      if (row <= 0.0) {
        keep[i] = false;
        changed = true;
      }
    }
  }

  TransitionMatrix out;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < kStateCount; ++i) {
    if (keep[i]) {
      kept.push_back(i);
      out.states.push_back(kAllStates[i]);
    } else {
      out.removed_states.push_back(kAllStates[i]);
    }
  }
  if (kept.empty()) throw Error(Errc::empty_counts, "no transition mass to average");

  out.p = RealMatrix(kept.size(), kept.size(), 0.0);
  for (std::size_t a = 0; a < kept.size(); ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < kept.size(); ++b) row += sum(kept[a], kept[b]);
    for (std::size_t b = 0; b < kept.size(); ++b) out.p(a, b) = sum(kept[a], kept[b]) / row;
  }
  return out;
}

std::optional<double> probe_probability(const TransitionMatrix* m, OrderState from, OrderState to) {
  if (m == nullptr) return std::nullopt;
  auto from_it = std::find(m->states.begin(), m->states.end(), from);
  auto to_it = std::find(m->states.begin(), m->states.end(), to);
  if (from_it == m->states.end() || to_it == m->states.end()) return std::nullopt;
  return m->p(static_cast<std::size_t>(from_it - m->states.begin()),
              static_cast<std::size_t>(to_it - m->states.begin()));
}

// White -> deep blue, linear in t (0..1).
std::string ramp_color(double t) {
  auto channel = [t](int from, int to) {
    return static_cast<int>(std::lround(from + t * (to - from)));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(255, 8), channel(255, 81),
                channel(255, 156));
  return buf;
}

ordered_json complex_json(const std::complex<double>& z) {
  return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

ordered_json analytics_json(const ChainAnalytics& a, std::span<const OrderState> states) {
  ordered_json j;
  j["irreducible"] = a.structure.irreducible;
  j["aperiodic"] = a.structure.aperiodic;
  j["ergodic"] = a.structure.ergodic;
  j["communicating_classes"] = a.structure.communicating_classes.size();
  ordered_json pi = ordered_json::object();
  ordered_json mrt = ordered_json::object();
  for (std::size_t i = 0; i < states.size(); ++i) {
    pi[std::string(state_code(states[i]))] = a.pi.pi[i];
    mrt[std::string(state_code(states[i]))] = a.mean_recurrence[i];
  }
  j["stationary"] = std::move(pi);
  j["mean_recurrence_time"] = std::move(mrt);
  ordered_json eigs = ordered_json::array();
  for (const auto& z : a.spectral.eigenvalues) eigs.push_back(complex_json(z));
  j["eigenvalues"] = std::move(eigs);
  j["slem"] = a.spectral.slem;
  j["spectral_gap_absolute"] = a.spectral.gap_absolute;
  j["spectral_gap"] = a.spectral.gap;
  j["relaxation_time"] = a.spectral.relaxation_time;
  j["entropy_rate_bits"] = a.entropy.bits_per_step;
  j["entropy_rate_max_bits"] = a.entropy.max_bits;
  return j;
}

ordered_json chi_json(const ChiSquareRecord& rec) {
  ordered_json j;
  j["ticker"] = rec.ticker;
  j["scope"] = rec.scope;
  if (rec.date) j["date"] = rec.date->to_string();
  if (rec.regime) j["regime"] = regime_name(*rec.regime);
  j["statistic"] = rec.result.statistic;
  j["dof"] = rec.result.dof;
  j["p_value"] = rec.result.p_value;
  j["low_expected_cells"] = rec.result.low_expected_cells;
  j["alpha"] = rec.result.alpha;
  j["reject_independence"] = rec.result.reject_null;
  return j;
}

}  // namespace

const char* regime_name(Regime r) { return r == Regime::kHigh ? "High" : "Low"; }

std::vector<SectorSpec> default_sectors() {
  return {
      {"Energy", {"NEE", "XOM", "CVX"}},
      {"Finance & Banking", {"BAC", "JPM", "WFC"}},
      {"FMCG", {"JNJ", "MCD", "PG"}},
      {"Healthcare", {"UNH", "CVS", "MCK"}},
      {"IT", {"AAPL", "MSFT", "GOOGL"}},
      {"Real Estate", {"AMT", "CCI", "PLD"}},
  };
}

std::string sector_slug(const std::string& name) {
  std::string out;
  bool gap = false;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (gap && !out.empty()) out.push_back('_');
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      gap = false;
    } else {
      gap = true;
    }
  }
  return out.empty() ? "sector" : out;
}

std::vector<SectorChainSet> build_sector_chains(
    const std::map<SeriesKey, TransitionCounts>& chains,
    const std::map<SeriesKey, VolatilityLabel>& labels, std::span<const SectorSpec> sectors,
    AggregationMode mode) {
  std::vector<SectorChainSet> out;
  for (const SectorSpec& sector : sectors) {
    bool sector_has_days = false;
    for (Regime regime : {Regime::kHigh, Regime::kLow}) {
      VolLabel want = regime == Regime::kHigh ? VolLabel::kHigh : VolLabel::kLow;

      std::vector<SeriesKey> members;
      std::vector<TransitionCounts> parts;
      for (const auto& [key, counts] : chains) {
        auto lab = labels.find(key);
        if (lab == labels.end() || lab->second.label != want) continue;
        if (std::find(sector.tickers.begin(), sector.tickers.end(), key.ticker) ==
            sector.tickers.end()) {
          continue;
        }
        members.push_back(key);
        parts.push_back(counts);
      }
      if (members.empty()) continue;
      sector_has_days = true;

      SectorChainSet set;
      set.sector = sector;
      set.regime = regime;
      set.members = std::move(members);
      set.pooled_counts = pool_counts(parts);
      if (mode == AggregationMode::kPooled) {
        set.matrix = fit_mle(set.pooled_counts);
      } else {
        std::vector<TransitionMatrix> fitted;
        fitted.reserve(parts.size());
        for (const TransitionCounts& part : parts) fitted.push_back(fit_mle(part));
        set.matrix = mean_of_matrices(fitted);
      }
      try {
        set.analytics = analyze_chain(set.matrix);
      } catch (const Error& e) {
        set.analytics_error = e.what();
      }
      out.push_back(std::move(set));
    }
    if (!sector_has_days) {
      throw Error(Errc::empty_sector, "sector '" + sector.name + "' has no labeled stock-days");
    }
  }
  return out;
}

std::vector<double> diagonal_inertia(const TransitionMatrix& matrix) {
  std::vector<double> out(matrix.order());
  for (std::size_t i = 0; i < matrix.order(); ++i) out[i] = matrix.p(i, i);
  return out;
}

std::vector<TransitionProbe> named_probes(const TransitionMatrix* high,
                                          const TransitionMatrix* low) {
  static constexpr std::pair<OrderState, OrderState> kPairs[] = {
      {OrderState::kFillBid, OrderState::kAddAsk},
      {OrderState::kFillAsk, OrderState::kAddBid},
      {OrderState::kAddBid, OrderState::kDeleteBid},
      {OrderState::kAddAsk, OrderState::kDeleteAsk},
  };
  std::vector<TransitionProbe> out;
  for (const auto& [from, to] : kPairs) {
    TransitionProbe probe;
    probe.from = from;
    probe.to = to;
    probe.prob_high = probe_probability(high, from, to);
    probe.prob_low = probe_probability(low, from, to);
    out.push_back(probe);
  }
  return out;
}

std::string heatmap_svg(const TransitionMatrix& matrix, const std::string& title) {
  const std::size_t r = matrix.order();
  constexpr int kCell = 48;
  constexpr int kLeft = 56;   // row labels
  constexpr int kTop = 64;    // title + column labels
  const int width = kLeft + kCell * static_cast<int>(r) + 8;
  const int height = kTop + kCell * static_cast<int>(r) + 8;

  double max_entry = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) max_entry = std::max(max_entry, matrix.p(i, j));
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<title>" << title << "</title>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";

  // Column = current state, row = next state: cell (col i, row j) shows p_ij.
  for (std::size_t i = 0; i < r; ++i) {
    int x = kLeft + static_cast<int>(i) * kCell + kCell / 2;
    svg << "<text x=\"" << x << "\" y=\"" << kTop - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << state_code(matrix.states[i]) << "</text>\n";
  }
  for (std::size_t j = 0; j < r; ++j) {
    int y = kTop + static_cast<int>(j) * kCell + kCell / 2 + 4;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << state_code(matrix.states[j]) << "</text>\n";
  }

  for (std::size_t j = 0; j < r; ++j) {      // rows: next state
    for (std::size_t i = 0; i < r; ++i) {    // columns: current state
      double v = matrix.p(i, j);
      double t = max_entry > 0.0 ? v / max_entry : 0.0;
      int x = kLeft + static_cast<int>(i) * kCell;
      int y = kTop + static_cast<int>(j) * kCell;
      svg << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
          << "\" height=\"" << kCell << "\" fill=\"" << ramp_color(t)
          << "\" stroke=\"#cccccc\"/>\n";
      svg << "<text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << (t > 0.55 ? "#ffffff" : "#1a1a1a") << "\">" << fixed(v, 2) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_matrix_csv(std::ostream& out, const TransitionMatrix& matrix) {
  out << "state";
  for (OrderState s : matrix.states) out << ',' << state_code(s);
  out << '\n';
  for (std::size_t i = 0; i < matrix.order(); ++i) {
    out << state_code(matrix.states[i]);
    for (std::size_t j = 0; j < matrix.order(); ++j) out << ',' << format_double(matrix.p(i, j));
    out << '\n';
  }
}

TransitionMatrix read_matrix_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return cells;
  };

  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::invalid_matrix_file, "empty matrix file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line);
  if (header.size() < 2 || header[0] != "state") {
    throw Error(Errc::invalid_matrix_file, "matrix header must be 'state,<codes...>'");
  }

  TransitionMatrix m;
  for (std::size_t c = 1; c < header.size(); ++c) {
    auto s = state_from_code(header[c]);
    if (!s) throw Error(Errc::invalid_matrix_file, "unknown state code '" + header[c] + "'");
    m.states.push_back(*s);
  }
  const std::size_t r = m.states.size();
  m.p = RealMatrix(r, r, 0.0);

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= r) throw Error(Errc::invalid_matrix_file, "more rows than states");
    auto cells = split(line);
    if (cells.size() != r + 1 || cells[0] != state_code(m.states[row])) {
      throw Error(Errc::invalid_matrix_file,
                  "row " + std::to_string(row + 1) + " does not match the header order");
    }
    for (std::size_t j = 0; j < r; ++j) {
      try {
        m.p(row, j) = std::stod(cells[j + 1]);
      } catch (const std::exception&) {
        throw Error(Errc::invalid_matrix_file, "bad probability '" + cells[j + 1] + "'");
      }
    }
    ++row;
  }
  if (row != r) throw Error(Errc::invalid_matrix_file, "fewer rows than states");
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(Errc::invalid_matrix_file, e.what());
  }
  return m;
}

std::string stationary_table_csv(std::span<const SectorChainSet> sets) {
  std::ostringstream out;
  out << "sector,regime";
  for (OrderState s : kAllStates) out << ',' << state_code(s);
  out << '\n';
  for (const SectorChainSet& set : sets) {
    out << set.sector.name << ',' << regime_name(set.regime);
    for (OrderState s : kAllStates) {
      out << ',';
      if (!set.analytics) continue;
      auto it = std::find(set.matrix.states.begin(), set.matrix.states.end(), s);
      if (it == set.matrix.states.end()) continue;
      out << stationary_cell(
          set.analytics->pi.pi[static_cast<std::size_t>(it - set.matrix.states.begin())]);
    }
    out << '\n';
  }
  return out.str();
}

std::string mrt_table_csv(std::span<const SectorChainSet> sets) {
  std::ostringstream out;
  out << "sector,regime";
  for (OrderState s : kAllStates) out << ',' << state_code(s);
  out << '\n';
  for (const SectorChainSet& set : sets) {
    out << set.sector.name << ',' << regime_name(set.regime);
    for (OrderState s : kAllStates) {
      out << ',';
      if (!set.analytics) continue;
      auto it = std::find(set.matrix.states.begin(), set.matrix.states.end(), s);
      if (it == set.matrix.states.end()) continue;
      out << fixed(
          set.analytics->mean_recurrence[static_cast<std::size_t>(it - set.matrix.states.begin())],
          1);
    }
    out << '\n';
  }
  return out.str();
}

std::string spectral_table_csv(std::span<const SectorChainSet> sets) {
  std::ostringstream out;
  out << "sector,regime,spectral_gap,relaxation_time,entropy_rate\n";
  for (const SectorChainSet& set : sets) {
    out << set.sector.name << ',' << regime_name(set.regime);
    if (set.analytics) {
      out << ',' << fixed(set.analytics->spectral.gap_absolute, 3) << ','
          << fixed(set.analytics->spectral.relaxation_time, 3) << ','
          << fixed(set.analytics->entropy.bits_per_step, 3);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string probes_table_csv(std::span<const SectorChainSet> sets) {
  // Pair up each sector's regimes, then append the cross-sector averages.
  std::map<std::string, std::pair<const TransitionMatrix*, const TransitionMatrix*>> by_sector;
  std::vector<std::string> order;
  for (const SectorChainSet& set : sets) {
    auto [it, inserted] = by_sector.try_emplace(set.sector.name, nullptr, nullptr);
    if (inserted) order.push_back(set.sector.name);
    if (set.regime == Regime::kHigh) {
      it->second.first = &set.matrix;
    } else {
      it->second.second = &set.matrix;
    }
  }

  std::ostringstream out;
  out << "sector,from,to,prob_high,prob_low\n";
  struct Sum {
    double high = 0.0, low = 0.0;
    std::size_t n_high = 0, n_low = 0;
  };
  std::map<std::pair<OrderState, OrderState>, Sum> totals;
  std::vector<std::pair<OrderState, OrderState>> probe_order;

  for (const std::string& name : order) {
    auto [high, low] = by_sector.at(name);
    for (const TransitionProbe& probe : named_probes(high, low)) {
      out << name << ',' << state_code(probe.from) << ',' << state_code(probe.to) << ',';
      if (probe.prob_high) out << format_double(*probe.prob_high);
      out << ',';
      if (probe.prob_low) out << format_double(*probe.prob_low);
      out << '\n';

      auto key = std::make_pair(probe.from, probe.to);
      if (!totals.contains(key)) probe_order.push_back(key);
      Sum& sum = totals[key];
      if (probe.prob_high) {
        sum.high += *probe.prob_high;
        ++sum.n_high;
      }
      if (probe.prob_low) {
        sum.low += *probe.prob_low;
        ++sum.n_low;
      }
    }
  }
  for (const auto& key : probe_order) {
    const Sum& sum = totals.at(key);
    out << "ALL," << state_code(key.first) << ',' << state_code(key.second) << ',';
    if (sum.n_high > 0) out << format_double(sum.high / static_cast<double>(sum.n_high));
    out << ',';
    if (sum.n_low > 0) out << format_double(sum.low / static_cast<double>(sum.n_low));
    out << '\n';
  }
  return out.str();
}

std::string chi_square_table_csv(std::span<const ChiSquareRecord> records) {
  std::ostringstream out;
  out << "ticker,scope,date,regime,statistic,dof,p_value,low_expected_cells,reject_independence\n";
  for (const ChiSquareRecord& rec : records) {
    out << rec.ticker << ',' << rec.scope << ',' << (rec.date ? rec.date->to_string() : "") << ','
        << (rec.regime ? regime_name(*rec.regime) : "") << ','
        << format_double(rec.result.statistic) << ',' << rec.result.dof << ','
        << format_double(rec.result.p_value) << ',' << rec.result.low_expected_cells << ','
        << (rec.result.reject_null ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string summary_json(const AnalysisSummary& summary) {
  ordered_json j;
  j["config"] = {
      {"inputs", summary.inputs},
      {"window", {{"from", summary.window_from}, {"to", summary.window_to}}},
      {"alpha", summary.alpha},
      {"aggregation", summary.aggregation},
      {"normalization", summary.normalization},
      {"sigma", summary.sigma_mode},
      {"session", summary.session},
  };

  ordered_json labels = ordered_json::array();
  for (const auto& [key, lab] : summary.labels) {
    labels.push_back({{"ticker", key.ticker},
                      {"date", key.date.to_string()},
                      {"normalized_range", lab.normalized_range},
                      {"mu", lab.mu},
                      {"sigma", lab.sigma},
                      {"label", vol_label_name(lab.label)}});
  }
  j["volatility_labels"] = std::move(labels);

  ordered_json chi = ordered_json::array();
  for (const ChiSquareRecord& rec : summary.chi_square) chi.push_back(chi_json(rec));
  j["chi_square"] = std::move(chi);

  ordered_json sectors = ordered_json::array();
  for (const SectorChainSet& set : summary.sets) {
    ordered_json s;
    s["sector"] = set.sector.name;
    s["regime"] = regime_name(set.regime);
    ordered_json members = ordered_json::array();
    for (const SeriesKey& key : set.members) {
      members.push_back({{"ticker", key.ticker}, {"date", key.date.to_string()}});
    }
    s["stock_days"] = std::move(members);
    ordered_json states = ordered_json::array();
    for (OrderState st : set.matrix.states) states.push_back(std::string(state_code(st)));
    s["states"] = std::move(states);
    ordered_json removed = ordered_json::array();
    for (OrderState st : set.matrix.removed_states) removed.push_back(std::string(state_code(st)));
    s["removed_states"] = std::move(removed);
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < set.matrix.order(); ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t k = 0; k < set.matrix.order(); ++k) row.push_back(set.matrix.p(i, k));
      rows.push_back(std::move(row));
    }
    s["transition_matrix"] = std::move(rows);
    ordered_json inertia = ordered_json::object();
    std::vector<double> diag = diagonal_inertia(set.matrix);
    for (std::size_t i = 0; i < set.matrix.order(); ++i) {
      inertia[std::string(state_code(set.matrix.states[i]))] = diag[i];
    }
    s["diagonal_inertia"] = std::move(inertia);
    if (set.analytics) {
      s["analytics"] = analytics_json(*set.analytics, set.matrix.states);
    } else {
      s["analytics_error"] = set.analytics_error;
    }
    sectors.push_back(std::move(s));
  }
  j["sector_chains"] = std::move(sectors);
  j["notes"] = summary.notes;

  return j.dump(2) + "\n";
}

}  // namespace orderflow
