#include "pcopula/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel_for.hpp"
#include "pcopula/csv.hpp"
#include "pcopula/error.hpp"

namespace pcop {

namespace {

void require_pairs(std::span<const double> a, std::span<const double> b, std::size_t min_n,
                   const char* what) {
  if (a.size() != b.size())
    throw InputError(std::string(what) + ": columns differ in length");
  if (a.size() < min_n)
    throw UndefinedStatistic(std::string(what) + " needs n >= " + std::to_string(min_n));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
      throw InputError(std::string(what) + ": non-finite value at row " + std::to_string(i));
}

std::vector<std::size_t> order_of(std::span<const double> a) {
  std::vector<std::size_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
  return idx;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> a) {
  const auto idx = order_of(a);
  std::vector<double> r(a.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i + 1;
    while (j < idx.size() && a[idx[j]] == a[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of positions i+1..j
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  require_pairs(a, b, 2, "pearson");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw UndefinedStatistic("correlation of a constant column");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman_emp(std::span<const double> a, std::span<const double> b) {
  require_pairs(a, b, 3, "spearman");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

// ---- Kendall ---------------------------------------------------------------

namespace {

long long tied_pairs_in_runs(const std::vector<double>& sorted) {
  long long ties = 0, run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      ties += run * (run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}

// Sorts v ascending, returning the number of strict inversions.
long long merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                      std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<long long>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

KendallCounts kendall_counts(std::span<const double> a, std::span<const double> b) {
  require_pairs(a, b, 2, "kendall");
  const std::size_t n = a.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a[i] < a[j] || (a[i] == a[j] && b[i] < b[j]);
  });

  KendallCounts c;
  c.pairs = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  long long joint = 0;
  {
    long long run_a = 1, run_ab = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_a = i < n && a[idx[i]] == a[idx[i - 1]];
      const bool same_ab = same_a && b[idx[i]] == b[idx[i - 1]];
      if (same_a) {
        ++run_a;
      } else {
        c.ties_a += run_a * (run_a - 1) / 2;
        run_a = 1;
      }
      if (same_ab) {
        ++run_ab;
      } else {
        joint += run_ab * (run_ab - 1) / 2;
        run_ab = 1;
      }
    }
  }
  std::vector<double> bs(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = b[idx[i]];
  const long long swaps = merge_count(bs, buf, 0, n);
  c.ties_b = tied_pairs_in_runs(bs);
  c.numerator = c.pairs - c.ties_a - c.ties_b + joint - 2 * swaps;
  return c;
}

double tau_b(const KendallCounts& c) {
  const long long da = c.pairs - c.ties_a;
  const long long db = c.pairs - c.ties_b;
  if (da <= 0 || db <= 0) throw UndefinedStatistic("kendall: a column is constant");
  return static_cast<double>(c.numerator) /
         std::sqrt(static_cast<double>(da) * static_cast<double>(db));
}

double kendall_emp(std::span<const double> a, std::span<const double> b) {
  return tau_b(kendall_counts(a, b));
}

// ---- empirical KDD ---------------------------------------------------------

namespace {

// Pseudo-ranks reduced to level indices: level values in ascending order
// and each observation's level.
struct Levels {
  std::vector<double> value;      // distinct rank / (n + 1), ascending
  std::vector<std::size_t> of;    // level index per observation
};

Levels levels_of(std::span<const double> col) {
  const auto r = average_ranks(col);
  const double denom = static_cast<double>(col.size() + 1);
  std::vector<double> distinct(r);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Levels lv;
  lv.of.resize(col.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    lv.of[i] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), r[i]) - distinct.begin());
  lv.value.resize(distinct.size());
  for (std::size_t k = 0; k < distinct.size(); ++k) lv.value[k] = distinct[k] / denom;
  return lv;
}

struct KddSetup {
  Levels a, b;
  double n = 0.0;
};

KddSetup kdd_setup(std::span<const double> a, std::span<const double> b) {
  require_pairs(a, b, 3, "kdd");
  KddSetup s{levels_of(a), levels_of(b), static_cast<double>(a.size())};
  if (s.a.value.size() < 2 || s.b.value.size() < 2)
    throw UndefinedStatistic("kdd: a column is constant");
  return s;
}

inline double lattice_dev(long long count, double n, double u, double v) {
  return std::abs(static_cast<double>(count) / n - u * v);
}

// max over columns of |C_n - uv| on one a-level, given per-b-level counts of
// observations with a-level <= that level.
double row_max(const std::vector<long long>& hist, const KddSetup& s, double u,
               const std::vector<std::size_t>* cols = nullptr) {
  double best = 0.0;
  long long cum = 0;
  std::size_t next = 0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    cum += hist[k];
    if (cols) {
      if (next >= cols->size() || (*cols)[next] != k) continue;
      ++next;
    }
    best = std::max(best, lattice_dev(cum, s.n, u, s.b.value[k]));
  }
  return best;
}

double finish(double max_dev) { return std::min(1.0, 4.0 * max_dev); }

std::vector<std::vector<std::size_t>> members_by_level(const Levels& lv) {
  std::vector<std::vector<std::size_t>> m(lv.value.size());
  for (std::size_t i = 0; i < lv.of.size(); ++i) m[lv.of[i]].push_back(i);
  return m;
}

std::vector<std::size_t> quantile_levels(std::size_t levels) {
  std::vector<std::size_t> q;
  const int pts = kKddQuantilePoints;
  for (int t = 0; t < pts; ++t) {
    const double pos = static_cast<double>(t) * static_cast<double>(levels - 1) / (pts - 1);
    q.push_back(static_cast<std::size_t>(std::llround(pos)));
  }
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

}  // namespace

namespace serial {
double kdd_emp_full(std::span<const double> a, std::span<const double> b) {
  const KddSetup s = kdd_setup(a, b);
  const auto members = members_by_level(s.a);
  std::vector<long long> hist(s.b.value.size(), 0);
  double best = 0.0;
  for (std::size_t j = 0; j < s.a.value.size(); ++j) {
    for (std::size_t i : members[j]) ++hist[s.b.of[i]];
    best = std::max(best, row_max(hist, s, s.a.value[j]));
  }
  return finish(best);
}
}  // namespace serial

namespace parallel {
double kdd_emp_full(std::span<const double> a, std::span<const double> b) {
  const KddSetup s = kdd_setup(a, b);
  std::vector<double> rows(s.a.value.size(), 0.0);
  detail::parallel_for(rows.size(), [&](std::size_t j) {
    std::vector<long long> hist(s.b.value.size(), 0);
    for (std::size_t i = 0; i < s.a.of.size(); ++i)
      if (s.a.of[i] <= j) ++hist[s.b.of[i]];
    rows[j] = row_max(hist, s, s.a.value[j]);
  });
  return finish(*std::max_element(rows.begin(), rows.end()));
}
}  // namespace parallel

double kdd_emp_restricted(std::span<const double> a, std::span<const double> b) {
  const KddSetup s = kdd_setup(a, b);
  const auto qa = quantile_levels(s.a.value.size());
  const auto qb = quantile_levels(s.b.value.size());

  // Quantile block: one histogram per selected a-level.
  std::vector<double> rows(qa.size(), 0.0);
  detail::parallel_for(qa.size(), [&](std::size_t r) {
    const std::size_t j = qa[r];
    std::vector<long long> hist(s.b.value.size(), 0);
    for (std::size_t i = 0; i < s.a.of.size(); ++i)
      if (s.a.of[i] <= j) ++hist[s.b.of[i]];
    rows[r] = row_max(hist, s, s.a.value[j], &qb);
  });
  double best = *std::max_element(rows.begin(), rows.end());

  // Sample points: dominance counts with a Fenwick tree over b-levels,
  // inserting whole a-levels before querying them.
  const auto members = members_by_level(s.a);
  std::vector<long long> tree(s.b.value.size() + 1, 0);
  for (std::size_t j = 0; j < members.size(); ++j) {
    for (std::size_t i : members[j])
      for (std::size_t k = s.b.of[i] + 1; k < tree.size(); k += k & (~k + 1)) ++tree[k];
    for (std::size_t i : members[j]) {
      long long count = 0;
      for (std::size_t k = s.b.of[i] + 1; k > 0; k -= k & (~k + 1)) count += tree[k];
      best = std::max(best, lattice_dev(count, s.n, s.a.value[j], s.b.value[s.b.of[i]]));
    }
  }
  return finish(best);
}

double kdd_emp(std::span<const double> a, std::span<const double> b) {
  if (a.size() > kKddFullLatticeMax) return kdd_emp_restricted(a, b);
  return parallel::kdd_emp_full(a, b);
}

// ---- regression residuals --------------------------------------------------

ResidualFit partial_correlation_fit(std::span<const double> x, std::span<const double> y,
                                    std::span<const double> z) {
  require_pairs(x, z, 4, "partial_correlation");
  require_pairs(y, z, 4, "partial_correlation");
  const double n = static_cast<double>(z.size());
  const double mz = std::accumulate(z.begin(), z.end(), 0.0) / n;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double szz = 0.0, sxz = 0.0, syz = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double dz = z[i] - mz;
    szz += dz * dz;
    sxz += dz * (x[i] - mx);
    syz += dz * (y[i] - my);
  }
  if (!(szz > 0.0)) throw UndefinedStatistic("partial_correlation: z is constant");
  ResidualFit f;
  f.beta = sxz / szz;
  f.alpha = mx - f.beta * mz;
  f.theta = syz / szz;
  f.gamma = my - f.theta * mz;
  std::vector<double> ex(z.size()), ey(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    ex[i] = x[i] - f.alpha - f.beta * z[i];
    ey[i] = y[i] - f.gamma - f.theta * z[i];
  }
  f.correlation = pearson(ex, ey);
  return f;
}

double partial_correlation(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z) {
  return partial_correlation_fit(x, y, z).correlation;
}

// ---- summary ---------------------------------------------------------------

std::string DependenceSummary::csv_header() { return "pair,spearman,kendall,kdd,n"; }

std::string DependenceSummary::csv_row() const {
  return csv_line({pair, format_g17(spearman), format_g17(kendall), format_g17(kdd),
                   std::to_string(n)});
}

DependenceSummary summarize(std::string pair, std::span<const double> a,
                            std::span<const double> b) {
  DependenceSummary s;
  s.pair = std::move(pair);
  s.spearman = spearman_emp(a, b);
  s.kendall = kendall_emp(a, b);
  s.kdd = kdd_emp(a, b);
  s.n = a.size();
  return s;
}

}  // namespace pcop
