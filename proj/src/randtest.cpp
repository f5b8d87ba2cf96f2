#include "specdte/randtest.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace specdte {

std::string_view to_string(Design d) {
  switch (d) {
    case Design::MatchedPair: return "matchedPair";
    case Design::Conjunctive: return "conjunctive";
    case Design::Censored: return "censored";
  }
  return "matchedPair";
}

namespace {

std::vector<double> pooled_grid(const Matrix& a, const Matrix& b) {
  std::vector<double> v(a.data(), a.data() + a.size());
  v.insert(v.end(), b.data(), b.data() + b.size());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double spectra_distance(const Vector& a, const Vector& b) {
  const Index n = std::max(a.size(), b.size());
  return (pad_spectrum(a, n) - pad_spectrum(b, n)).squaredNorm();
}

void check_resamples(int resamples) {
  if (resamples < 1) throw Error("randomization test: number of resamples must be >= 1");
}

void check_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw Error("randomization test: pi must lie in (0,1)");
}

Matrix principal_submatrix(const Matrix& m, const std::vector<Index>& idx) {
  const auto k = static_cast<Index>(idx.size());
  Matrix out(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      out(a, b) = m(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

}  // namespace

double p_value_from(double statistic, const std::vector<double>& resampled) {
  const auto hits = std::count_if(resampled.begin(), resampled.end(),
                                  [&](double t) { return t >= statistic; });
  return (1.0 + static_cast<double>(hits)) /
         (static_cast<double>(resampled.size()) + 1.0);
}

double eig_distance_stat(const Matrix& m1, const Matrix& m0,
                         const std::vector<double>& grid) {
  if (grid.empty()) throw Error("eig_distance_stat: empty threshold grid");
  double best = 0.0;
  for (double y : grid) {
    const Vector l1 = eig_values(indicator(m1, y).entries);
    const Vector l0 = eig_values(indicator(m0, y).entries);
    best = std::max(best, spectra_distance(l1, l0));
  }
  return best;
}

TestReport matched_pair_test(
    const std::vector<std::pair<OutcomeMatrix, OutcomeMatrix>>& pairs, int resamples,
    std::uint64_t seed) {
  if (pairs.empty()) throw Error("matched_pair_test: no pairs supplied");
  check_resamples(resamples);

  // Per pair, the statistic in observed and swapped orientation.
  std::vector<std::array<double, 2>> per_pair;
  per_pair.reserve(pairs.size());
  for (const auto& [m1, m0] : pairs) {
    const auto grid = pooled_grid(m1.entries(), m0.entries());
    per_pair.push_back({eig_distance_stat(m1.entries(), m0.entries(), grid),
                        eig_distance_stat(m0.entries(), m1.entries(), grid)});
  }

  TestReport rep;
  rep.design = Design::MatchedPair;
  rep.seed = seed;
  for (const auto& s : per_pair) rep.statistic = std::max(rep.statistic, s[0]);

  rep.resampled.resize(static_cast<std::size_t>(resamples));
  for (int a = 0; a < resamples; ++a) {
    auto rng = substream(seed, static_cast<std::uint64_t>(a));
    double t = 0.0;
    for (const auto& s : per_pair) {
      const bool swap = uniform01(rng) < 0.5;
      t = std::max(t, s[swap ? 1 : 0]);
    }
    rep.resampled[static_cast<std::size_t>(a)] = t;
  }
  rep.p_value = p_value_from(rep.statistic, rep.resampled);
  return rep;
}

double conjunctive_statistic(const BipartiteMatrix& y,
                             const std::vector<int>& buyer_groups,
                             const std::vector<int>& seller_groups) {
  if (static_cast<Index>(buyer_groups.size()) != y.rows() ||
      static_cast<Index>(seller_groups.size()) != y.cols())
    throw Error("conjunctive_statistic: label lengths do not match the matrix");

  std::array<std::vector<Index>, 2> buyers;
  std::array<std::vector<Index>, 2> sellers;
  for (Index i = 0; i < y.rows(); ++i) {
    const int g = buyer_groups[static_cast<std::size_t>(i)];
    if (g != 1 && g != 2) throw Error("conjunctive_statistic: buyer labels must be 1 or 2");
    buyers[static_cast<std::size_t>(g - 1)].push_back(i);
  }
  for (Index j = 0; j < y.cols(); ++j) {
    const int g = seller_groups[static_cast<std::size_t>(j)];
    if (g != 1 && g != 2) throw Error("conjunctive_statistic: seller labels must be 1 or 2");
    sellers[static_cast<std::size_t>(g - 1)].push_back(j);
  }
  for (const auto& g : buyers)
    if (g.empty()) throw Error("conjunctive_statistic: empty buyer group");
  for (const auto& g : sellers)
    if (g.empty()) throw Error("conjunctive_statistic: empty seller group");

  // Symmetrized blocks for the four (buyer group, seller group) cells.
  std::array<Matrix, 4> blocks;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t t = 0; t < 2; ++t) {
      const auto& bs = buyers[s];
      const auto& ss = sellers[t];
      Matrix sub(static_cast<Index>(bs.size()), static_cast<Index>(ss.size()));
      for (Index a = 0; a < sub.rows(); ++a)
        for (Index b = 0; b < sub.cols(); ++b)
          sub(a, b) = y.entries()(bs[static_cast<std::size_t>(a)],
                                  ss[static_cast<std::size_t>(b)]);
      blocks[2 * s + t] = symmetrize(BipartiteMatrix(std::move(sub))).entries();
    }

  std::vector<double> grid = distinct_values(y.entries());
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double best = 0.0;
  for (double thr : grid) {
    std::array<Vector, 4> vals;
    for (std::size_t k = 0; k < 4; ++k)
      vals[k] = eig_values(indicator(blocks[k], thr).entries);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        best = std::max(best, spectra_distance(vals[a], vals[b]));
  }
  return best;
}

TestReport conjunctive_test(const BipartiteMatrix& y, const std::vector<int>& buyer_groups,
                            const std::vector<int>& seller_groups, double pi,
                            int resamples, std::uint64_t seed) {
  check_pi(pi);
  check_resamples(resamples);

  TestReport rep;
  rep.design = Design::Conjunctive;
  rep.seed = seed;
  rep.statistic = conjunctive_statistic(y, buyer_groups, seller_groups);

  auto has_both = [](const std::vector<int>& g) {
    return std::find(g.begin(), g.end(), 1) != g.end() &&
           std::find(g.begin(), g.end(), 2) != g.end();
  };

  rep.resampled.resize(static_cast<std::size_t>(resamples));
  std::vector<int> bg(buyer_groups.size());
  std::vector<int> sg(seller_groups.size());
  for (int a = 0; a < resamples; ++a) {
    auto rng = substream(seed, static_cast<std::uint64_t>(a));
    int tries = 0;
    for (;;) {
      for (auto& g : bg) g = uniform01(rng) < pi ? 2 : 1;
      for (auto& g : sg) g = uniform01(rng) < pi ? 2 : 1;
      if (has_both(bg) && has_both(sg)) break;
      ++rep.redraws;
      if (++tries > kMaxRedraws) {
        std::ostringstream os;
        os << "conjunctive_test: resample " << a << " produced an empty group in "
           << kMaxRedraws << " redraws (buyers " << bg.size() << ", sellers "
           << sg.size() << ", pi " << pi << ")";
        throw Error(os.str());
      }
    }
    rep.resampled[static_cast<std::size_t>(a)] = conjunctive_statistic(y, bg, sg);
  }
  rep.p_value = p_value_from(rep.statistic, rep.resampled);
  return rep;
}

TestReport censored_test(const OutcomeMatrix& y1, const OutcomeMatrix& y0, double pi,
                         int resamples, std::uint64_t seed) {
  check_pi(pi);
  check_resamples(resamples);
  const Matrix& control = y0.entries();

  TestReport rep;
  rep.design = Design::Censored;
  rep.seed = seed;
  rep.statistic = eig_distance_stat(y1.entries(), control,
                                    pooled_grid(y1.entries(), control));

  // Resampled treated sets are submatrices of the control matrix, so the
  // pooled grid is the control grid and its spectra are fixed.
  const std::vector<double> grid = distinct_values(control);
  std::vector<Vector> control_spectra;
  control_spectra.reserve(grid.size());
  for (double thr : grid) control_spectra.push_back(eig_values(indicator(control, thr).entries));

  rep.resampled.resize(static_cast<std::size_t>(resamples));
  std::vector<Index> idx;
  for (int a = 0; a < resamples; ++a) {
    auto rng = substream(seed, static_cast<std::uint64_t>(a));
    int tries = 0;
    for (;;) {
      idx.clear();
      for (Index i = 0; i < y0.size(); ++i)
        if (uniform01(rng) < pi) idx.push_back(i);
      if (idx.size() >= 2) break;
      ++rep.redraws;
      if (++tries > kMaxRedraws) {
        std::ostringstream os;
        os << "censored_test: resample " << a << " drew fewer than two treated agents in "
           << kMaxRedraws << " redraws (control size " << y0.size() << ", pi " << pi
           << ")";
        throw Error(os.str());
      }
    }
    const Matrix sub = principal_submatrix(control, idx);
    double t = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Vector l = eig_values(indicator(sub, grid[k]).entries);
      t = std::max(t, spectra_distance(l, control_spectra[k]));
    }
    rep.resampled[static_cast<std::size_t>(a)] = t;
  }
  rep.p_value = p_value_from(rep.statistic, rep.resampled);
  return rep;
}

}  // namespace specdte
