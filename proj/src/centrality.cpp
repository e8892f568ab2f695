#include "citepred/centrality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include "citepred/error.hpp"
#include "citepred/parallel.hpp"

namespace citepred::centrality {

namespace {

using Index = WeightedGraph::Index;

// Sources are processed in fixed blocks whose partial sums are committed to
// the total in block order, which keeps floating-point results independent of
// the number of threads.
constexpr std::size_t kSourceBlock = 64;

struct BfsScratch {
  std::vector<int> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<Index> order;
  std::vector<double> partial;
  std::vector<Index> touched;
  std::vector<char> is_touched;

  explicit BfsScratch(std::size_t n)
      : dist(n, -1), sigma(n, 0.0), delta(n, 0.0), partial(n, 0.0), is_touched(n, 0) {
    order.reserve(n);
  }
};

struct SourceResult {
  std::size_t reached = 0;
  double distance_sum = 0.0;
};

// Single-source BFS plus, when requested, Brandes' dependency accumulation
// into scratch.partial.
SourceResult run_source(const WeightedGraph& g, Index s, BfsScratch& sc, bool dependencies) {
  auto& dist = sc.dist;
  auto& sigma = sc.sigma;
  auto& delta = sc.delta;
  auto& order = sc.order;
  order.clear();
  dist[s] = 0;
  sigma[s] = 1.0;
  order.push_back(s);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Index v = order[head];
    const int next = dist[v] + 1;
    const double sv = sigma[v];
    for (const Index w : g.adjacent(v)) {
      const int dw = dist[w];
      if (dw < 0) {
        dist[w] = next;
        sigma[w] = sv;
        order.push_back(w);
      } else if (dw == next) {
        sigma[w] += sv;
      }
    }
  }

  SourceResult result;
  result.reached = order.size();
  for (Index v : order) result.distance_sum += dist[v];

  if (dependencies) {
    for (std::size_t k = order.size(); k-- > 1;) {
      const Index w = order[k];
      const double coeff = (1.0 + delta[w]) / sigma[w];
      const int up = dist[w] - 1;
      for (const Index v : g.adjacent(w)) {
        if (dist[v] == up) delta[v] += sigma[v] * coeff;
      }
      sc.partial[w] += delta[w];
      if (!sc.is_touched[w]) {
        sc.is_touched[w] = 1;
        sc.touched.push_back(w);
      }
    }
  }
  for (Index v : order) {
    dist[v] = -1;
    sigma[v] = 0.0;
    delta[v] = 0.0;
  }
  return result;
}

double closeness_score(std::size_t n, const SourceResult& r) {
  if (n < 2 || r.reached < 2) return 0.0;
  const double reach = static_cast<double>(r.reached - 1);
  return (reach / r.distance_sum) * (reach / static_cast<double>(n - 1));
}

// Shared driver: raw pair-dependency totals (each unordered pair counted from
// both endpoints) and/or closeness.
void sweep_sources(const WeightedGraph& g, unsigned threads, Eigen::VectorXd* raw_betweenness,
                   Eigen::VectorXd* closeness) {
  const std::size_t n = g.node_count();
  if (raw_betweenness) raw_betweenness->setZero(static_cast<Eigen::Index>(n));
  if (closeness) closeness->setZero(static_cast<Eigen::Index>(n));
  if (n == 0) return;

  const bool dependencies = raw_betweenness != nullptr;
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(blocks)));
  std::vector<std::unique_ptr<BfsScratch>> scratch(workers);

  std::mutex commit_mutex;
  std::condition_variable commit_cv;
  std::size_t next_commit = 0;

  parallel_for(blocks, workers, [&](unsigned worker, std::size_t block) {
    if (!scratch[worker]) scratch[worker] = std::make_unique<BfsScratch>(n);
    auto& sc = *scratch[worker];
    const std::size_t begin = block * kSourceBlock;
    const std::size_t end = std::min(n, begin + kSourceBlock);
    for (std::size_t s = begin; s < end; ++s) {
      const auto r = run_source(g, static_cast<Index>(s), sc, dependencies);
      if (closeness) (*closeness)[static_cast<Eigen::Index>(s)] = closeness_score(n, r);
    }
    if (!dependencies) return;
    std::unique_lock lock(commit_mutex);
    commit_cv.wait(lock, [&] { return next_commit == block; });
    for (Index v : sc.touched) {
      (*raw_betweenness)[v] += sc.partial[v];
      sc.partial[v] = 0.0;
      sc.is_touched[v] = 0;
    }
    sc.touched.clear();
    ++next_commit;
    commit_cv.notify_all();
  });
}

void normalize_betweenness(Eigen::VectorXd& raw, std::size_t n) {
  if (n < 3) {
    raw.setZero();
    return;
  }
  // Halve the ordered-pair total, then divide by (n-1)(n-2)/2.
  raw /= static_cast<double>(n - 1) * static_cast<double>(n - 2);
}

double ego_constraint(const WeightedGraph& g, Index i, const Eigen::VectorXd& strength,
                      std::vector<int>& position, std::vector<double>& indirect) {
  const auto nbrs = g.neighbors(i);
  if (nbrs.empty()) return 1.0;
  const double s_i = strength[i];
  indirect.assign(nbrs.size(), 0.0);
  for (std::size_t k = 0; k < nbrs.size(); ++k) position[nbrs[k].node] = static_cast<int>(k);
  for (const auto& via : nbrs) {
    const double p_iq = via.weight / s_i;
    const double s_q = strength[via.node];
    for (const auto& nb : g.neighbors(via.node)) {
      if (nb.node == i) continue;
      const int k = position[nb.node];
      if (k >= 0) indirect[static_cast<std::size_t>(k)] += p_iq * (nb.weight / s_q);
    }
  }
  double c = 0.0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const double term = nbrs[k].weight / s_i + indirect[k];
    c += term * term;
    position[nbrs[k].node] = -1;
  }
  return c;
}

}  // namespace

Eigen::VectorXd degree_all(const WeightedGraph& g) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(g.node_count()));
  for (Index i = 0; i < g.node_count(); ++i) {
    double sum = 0.0;
    for (const auto& nb : g.neighbors(i)) sum += nb.weight;
    out[i] = sum;
  }
  return out;
}

Eigen::VectorXd betweenness_all(const WeightedGraph& g, unsigned threads) {
  Eigen::VectorXd raw;
  sweep_sources(g, threads, &raw, nullptr);
  normalize_betweenness(raw, g.node_count());
  return raw;
}

Eigen::VectorXd closeness_all(const WeightedGraph& g, unsigned threads) {
  Eigen::VectorXd out;
  sweep_sources(g, threads, nullptr, &out);
  return out;
}

Eigen::VectorXd constraint_all(const WeightedGraph& g, unsigned threads) {
  const std::size_t n = g.node_count();
  const Eigen::VectorXd strength = degree_all(g);
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  const unsigned workers = resolve_threads(threads);
  std::vector<std::vector<int>> position(workers);
  std::vector<std::vector<double>> indirect(workers);
  parallel_for(n, workers, [&](unsigned worker, std::size_t i) {
    if (position[worker].empty()) position[worker].assign(n, -1);
    out[static_cast<Eigen::Index>(i)] =
        ego_constraint(g, static_cast<Index>(i), strength, position[worker], indirect[worker]);
  });
  return out;
}

std::optional<Eigen::Index> MetricTable::find(std::string_view id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<Eigen::Index>(it - ids.begin());
}

MetricTable compute_all(const WeightedGraph& g, unsigned threads) {
  MetricTable t;
  t.ids = g.node_ids();
  t.degree = degree_all(g);
  sweep_sources(g, threads, &t.betweenness, &t.closeness);
  normalize_betweenness(t.betweenness, g.node_count());
  t.constraint = constraint_all(g, threads);
  return t;
}

void write_metric_dump(std::ostream& out, const MetricTable& table, const ConfigEcho& echo) {
  write_echo(out, echo);
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    out << table.ids[static_cast<std::size_t>(i)] << ' ' << format_decimal(table.degree[i]) << ' '
        << format_decimal(table.betweenness[i]) << ' ' << format_decimal(table.closeness[i]) << ' '
        << format_decimal(table.constraint[i]) << '\n';
  }
}

MetricTable read_metric_dump(std::istream& in) {
  std::vector<std::string> ids;
  std::vector<std::array<double, 4>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string id;
    std::array<double, 4> v{};
    if (!(fields >> id >> v[0] >> v[1] >> v[2] >> v[3])) {
      throw DataError("metric dump line " + std::to_string(line_no) + ": expected 5 fields");
    }
    if (!ids.empty() && !(ids.back() < id)) {
      throw DataError("metric dump line " + std::to_string(line_no) + ": ids not in strictly increasing order");
    }
    ids.push_back(std::move(id));
    rows.push_back(v);
  }
  MetricTable t;
  const auto n = static_cast<Eigen::Index>(ids.size());
  t.ids = std::move(ids);
  t.degree.resize(n);
  t.betweenness.resize(n);
  t.closeness.resize(n);
  t.constraint.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    t.degree[i] = r[0];
    t.betweenness[i] = r[1];
    t.closeness[i] = r[2];
    t.constraint[i] = r[3];
  }
  return t;
}

int rotating_leadership(std::span<const double> series, double epsilon) {
  if (series.empty()) throw DataError("rotating leadership needs at least one yearly value");
  if (!(epsilon >= 0.0)) throw ConfigError("oscillation epsilon must be non-negative");
  constexpr double kAbsoluteFloor = 1e-12;
  auto significant = [&](double a, double b) {
    return std::abs(a - b) > epsilon * std::max({a, b, kAbsoluteFloor});
  };
  int count = 0;
  for (std::size_t t = 1; t + 1 < series.size(); ++t) {
    const double prev = series[t - 1];
    const double cur = series[t];
    const double next = series[t + 1];
    const bool extremum = (cur > prev && cur > next) || (cur < prev && cur < next);
    if (extremum && significant(cur, prev) && significant(cur, next)) ++count;
  }
  return count;
}

LeadershipTable leadership_table(const std::map<int, WeightedGraph>& yearly, double epsilon,
                                 unsigned threads) {
  LeadershipTable table;
  const std::size_t span = yearly.size();
  std::size_t slot = 0;
  for (const auto& [year, g] : yearly) {
    table.years.push_back(year);
    const Eigen::VectorXd b = betweenness_all(g, threads);
    for (Index i = 0; i < g.node_count(); ++i) {
      auto [it, inserted] = table.series.try_emplace(g.id(i), span, 0.0);
      it->second[slot] = b[i];
    }
    ++slot;
  }
  for (const auto& [author, values] : table.series) {
    table.counts.emplace(author, rotating_leadership(values, epsilon));
  }
  return table;
}

void write_leadership_table(std::ostream& out, const LeadershipTable& table, const ConfigEcho& echo) {
  write_echo(out, echo);
  out << "author count";
  for (int y : table.years) out << ' ' << y;
  out << '\n';
  for (const auto& [author, values] : table.series) {
    out << author << ' ' << table.counts.at(author);
    for (double v : values) out << ' ' << format_decimal(v);
    out << '\n';
  }
}

LeadershipTable read_leadership_table(std::istream& in) {
  LeadershipTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    if (!header) {
      std::string a, c;
      fields >> a >> c;
      if (a != "author" || c != "count") throw DataError("leadership table: missing header line");
      int y;
      while (fields >> y) table.years.push_back(y);
      header = true;
      continue;
    }
    std::string author;
    int count;
    if (!(fields >> author >> count)) {
      throw DataError("leadership table line " + std::to_string(line_no) + ": expected author and count");
    }
    std::vector<double> values(table.years.size());
    for (auto& v : values) {
      if (!(fields >> v)) throw DataError("leadership table line " + std::to_string(line_no) + ": short series");
    }
    table.counts[author] = count;
    table.series[author] = std::move(values);
  }
  if (!header) throw DataError("leadership table: missing header line");
  return table;
}

}  // namespace citepred::centrality
