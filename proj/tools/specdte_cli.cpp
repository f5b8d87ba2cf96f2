// specdte: command-line front end. Every command reads CSV matrices, calls
// one library operation and emits a JSON result document (stdout or --out).

#include "specdte/bipartite.hpp"
#include "specdte/bounds.hpp"
#include "specdte/hetero.hpp"
#include "specdte/io_formats.hpp"
#include "specdte/oracle.hpp"
#include "specdte/randtest.hpp"
#include "specdte/scalar_baseline.hpp"
#include "specdte/smooth.hpp"
#include "specdte/ste.hpp"
#include "specdte/synth.hpp"

#include <CLI11.hpp>
#include <Eigen/QR>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>

namespace fs = std::filesystem;
using namespace specdte;

namespace {

struct Common {
  std::string out;
  bool exclude_diagonal = false;
  bool header = false;
  char delimiter = ',';
  CsvOptions csv() const { return {header, delimiter, kSymmetryTolerance}; }
  BoundsOptions bounds() const { return {exclude_diagonal}; }
};

Json interval_json(const IntervalBound& b) {
  return Json{{"lower", b.lower},
              {"upper", b.upper},
              {"binding_lower", to_string(b.binding_lower)},
              {"binding_upper", to_string(b.binding_upper)},
              {"clipped", b.clipped}};
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json perm_json(const Permutation& p) {
  Json a = Json::array();
  for (Index v : p) a.push_back(v);
  return a;
}

std::vector<double> flatten(const Matrix& m) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

std::vector<int> read_labels(const fs::path& path, const CsvOptions& csv) {
  std::vector<int> out;
  for (double v : flatten(read_csv_grid(path, csv))) {
    if (v != std::floor(v)) throw Error(path.string() + ": labels must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// One "treated.csv,control.csv" pair per line; relative paths resolve
// against the list file's directory.
std::vector<std::pair<fs::path, fs::path>> read_pair_list(const fs::path& list) {
  std::ifstream in(list);
  if (!in) throw Error("cannot open " + list.string());
  std::vector<std::pair<fs::path, fs::path>> out;
  const fs::path base = list.parent_path();
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(list.string() + ": line " + std::to_string(lineno) + " needs two comma-separated paths");
    fs::path a = trim(line.substr(0, comma));
    fs::path b = trim(line.substr(comma + 1));
    if (a.is_relative()) a = base / a;
    if (b.is_relative()) b = base / b;
    out.emplace_back(a, b);
  }
  if (out.empty()) throw Error(list.string() + ": no pairs listed");
  return out;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

BasisTag parse_basis(const std::string& s) {
  return s == "treated" ? BasisTag::Treated : BasisTag::Untreated;
}

HeteroMode parse_mode(const std::string& s) {
  return s == "paperExact" ? HeteroMode::PaperExact : HeteroMode::Conservative;
}

KernelKind parse_kernel(const std::string& s) {
  return s == "symmetricQuartic" ? KernelKind::SymmetricQuartic : KernelKind::OneSidedQuintic;
}

void emit(const ResultDocument& doc, const Common& common) {
  if (common.out.empty())
    std::cout << serialize(doc);
  else
    write_result_json(doc, common.out);
}

void add_common(CLI::App* cmd, Common& c, bool matrix_command) {
  cmd->add_option("--out", c.out, "write the JSON result document here instead of stdout");
  cmd->add_flag("--header", c.header, "CSV inputs start with a header row");
  cmd->add_option("--delimiter", c.delimiter, "CSV field delimiter");
  if (matrix_command)
    cmd->add_flag("--exclude-diagonal", c.exclude_diagonal, "drop self pairs (i == j)");
}

ResultDocument new_doc(std::string kind, const std::vector<fs::path>& inputs, const Common& c) {
  ResultDocument doc;
  doc.kind = std::move(kind);
  doc.inputs_digest = digest_files(inputs);
  doc.parameters["exclude_diagonal"] = c.exclude_diagonal;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral bounds and effects for pairwise treatment outcomes", "specdte"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  Common c;
  std::string y1, y0, pairs, weights, basis = "treated", mode = "conservative",
                                      kernel = "oneSidedQuintic", design;
  double t1 = 0.0, t0 = 0.0, pi = 0.5, h = 0.0;
  std::vector<double> grid;
  bool monotonize = false;
  std::optional<std::uint64_t> seed;
  int resamples = 99;

  const std::vector<std::string> bases{"treated", "untreated"};

  // dpo
  auto* dpo = app.add_subcommand("dpo", "bounds on the joint CDF F(t1, t0)");
  add_common(dpo, c, true);
  dpo->add_option("--y1", y1, "treated outcome matrix (CSV)")->required()->check(CLI::ExistingFile);
  dpo->add_option("--y0", y0, "untreated outcome matrix (CSV)")->required()->check(CLI::ExistingFile);
  dpo->add_option("--t1", t1, "treated threshold")->required();
  dpo->add_option("--t0", t0, "untreated threshold")->required();

  // dte
  auto* dte = app.add_subcommand("dte", "bounds on the distribution of treatment effects");
  add_common(dte, c, true);
  dte->add_option("--y1", y1, "treated outcomes (square matrix, or a single column for scalar outcomes)")
      ->required()->check(CLI::ExistingFile);
  dte->add_option("--y0", y0, "untreated outcomes")->required()->check(CLI::ExistingFile);
  dte->add_option("--grid", grid, "effect values, comma separated")->delimiter(',')->required();
  dte->add_flag("--monotonize", monotonize, "running max/min envelope over the grid");

  // cells
  auto* cells = app.add_subcommand("cells", "binary cell bounds, one network or a weighted average");
  add_common(cells, c, true);
  auto* cells_y1 = cells->add_option("--y1", y1, "treated binary matrix")->check(CLI::ExistingFile);
  cells->add_option("--y0", y0, "untreated binary matrix")->check(CLI::ExistingFile)->needs(cells_y1);
  cells_y1->needs(cells->get_option("--y0"));
  auto* cells_pairs = cells->add_option("--pairs", pairs, "file listing treated,control CSV pairs")
                          ->check(CLI::ExistingFile)->excludes(cells_y1);
  cells->add_option("--weights", weights, "network weights (CSV); default network sizes")
      ->check(CLI::ExistingFile)->needs(cells_pairs);

  // ste
  bool nonextrap = false;
  std::string matrix_out, samples_out;
  auto* ste_cmd = app.add_subcommand("ste", "spectral treatment effect matrix and diagnostics");
  add_common(ste_cmd, c, true);
  ste_cmd->add_option("--y1", y1)->required()->check(CLI::ExistingFile);
  ste_cmd->add_option("--y0", y0)->required()->check(CLI::ExistingFile);
  ste_cmd->add_option("--basis", basis, "eigenbasis arm")->check(CLI::IsMember(bases));
  ste_cmd->add_option("--matrix-out", matrix_out, "also write the STE matrix as CSV");
  ste_cmd->add_flag("--non-extrapolative", nonextrap, "add Frank-Wolfe doubly stochastic weights");

  // hetero
  std::optional<double> ht1, ht0, hy;
  std::string hbasis;
  auto* het = app.add_subcommand("hetero", "heterogeneity-adjusted bounds or STE");
  add_common(het, c, true);
  het->add_option("--y1", y1)->required()->check(CLI::ExistingFile);
  het->add_option("--y0", y0)->required()->check(CLI::ExistingFile);
  het->add_option("--mode", mode)->check(CLI::IsMember({"conservative", "paperExact"}));
  auto* het_t1 = het->add_option("--t1", ht1, "DPO treated threshold");
  auto* het_t0 = het->add_option("--t0", ht0, "DPO untreated threshold");
  het_t1->needs(het_t0);
  het_t0->needs(het_t1);
  auto* het_y = het->add_option("--y", hy, "DTE effect value")->excludes(het_t1);
  het->add_option("--ste", hbasis, "heterogeneity-adjusted STE in this arm's basis")
      ->check(CLI::IsMember(bases))->excludes(het_t1)->excludes(het_y);

  // bipartite
  auto* bip = app.add_subcommand("bipartite", "DPO bounds for rectangular (two-population) outcomes");
  add_common(bip, c, true);
  bip->add_option("--y1", y1)->required()->check(CLI::ExistingFile);
  bip->add_option("--y0", y0)->required()->check(CLI::ExistingFile);
  bip->add_option("--t1", t1)->required();
  bip->add_option("--t0", t0)->required();

  // randtest
  std::string buyers, sellers, ymat;
  auto* rt = app.add_subcommand("randtest", "randomization test of no treatment effect");
  add_common(rt, c, false);
  rt->add_option("--design", design)->required()->check(
      CLI::IsMember({"matchedPair", "conjunctive", "censored"}));
  rt->add_option("--y1", y1, "censored: treated matrix")->check(CLI::ExistingFile);
  rt->add_option("--y0", y0, "censored: control matrix")->check(CLI::ExistingFile);
  rt->add_option("--pairs", pairs, "matchedPair: file listing pairs")->check(CLI::ExistingFile);
  rt->add_option("--y", ymat, "conjunctive: buyer x seller outcome matrix")->check(CLI::ExistingFile);
  rt->add_option("--buyers", buyers, "conjunctive: buyer labels (1/2)")->check(CLI::ExistingFile);
  rt->add_option("--sellers", sellers, "conjunctive: seller labels (1/2)")->check(CLI::ExistingFile);
  rt->add_option("--pi", pi, "assignment probability")->check(CLI::Range(0.0, 1.0));
  rt->add_option("--A", resamples, "number of resamples")->check(CLI::PositiveNumber);
  rt->add_option("--seed", seed, "root seed (generated and echoed if omitted)");

  // smooth
  std::optional<double> sy;
  auto* sm = app.add_subcommand("smooth", "kernel-smoothed DPO bounds or STE distribution function");
  add_common(sm, c, true);
  sm->add_option("--y1", y1)->required()->check(CLI::ExistingFile);
  sm->add_option("--y0", y0)->required()->check(CLI::ExistingFile);
  auto* sm_t1 = sm->add_option("--t1", ht1);
  auto* sm_t0 = sm->add_option("--t0", ht0);
  sm_t1->needs(sm_t0);
  sm_t0->needs(sm_t1);
  auto* sm_y = sm->add_option("--y", sy, "STE CDF at this value")->excludes(sm_t1);
  sm->add_option("--basis", basis)->check(CLI::IsMember(bases));
  sm->add_option("--bandwidth", h, "bandwidth (default 1.06 sd n^(-1/3))")->check(CLI::PositiveNumber);
  sm->add_option("--kernel", kernel)->check(CLI::IsMember({"symmetricQuartic", "oneSidedQuintic"}));
  (void)sm_y;

  // synth
  std::string generator, outdir, graph;
  int n = 20, periods = 5, features = 0, population = 0;
  double p = 0.3, a0 = 0.2, a1 = 0.3, b0 = 0.0, b1 = 0.0, sigma2 = 1.0, r0 = 0.5, r1 = 1.5;
  auto* sy_cmd = app.add_subcommand("synth", "rank-invariant synthetic experiment");
  add_common(sy_cmd, c, false);
  sy_cmd->add_option("--generator", generator)->required()->check(
      CLI::IsMember({"diffusion", "social", "linkformation", "factor"}));
  sy_cmd->add_option("--out-dir", outdir, "directory for the generated CSV matrices")->required();
  sy_cmd->add_option("--n", n, "number of agents")->check(CLI::Range(2, 100000));
  sy_cmd->add_option("--graph", graph, "adjacency CSV (diffusion, social); default random graph")
      ->check(CLI::ExistingFile);
  sy_cmd->add_option("--p", p, "random graph link probability")->check(CLI::Range(0.0, 1.0));
  sy_cmd->add_option("--alpha0", a0);
  sy_cmd->add_option("--alpha1", a1);
  sy_cmd->add_option("--periods", periods);
  sy_cmd->add_option("--beta0", b0, "social: default 0.2/lambda_max; linkformation: default 0.4");
  sy_cmd->add_option("--beta1", b1, "social: default 0.5/lambda_max; linkformation: default 0.9");
  sy_cmd->add_option("--sigma2", sigma2);
  sy_cmd->add_option("--features", features, "linkformation: covariate count (default n)");
  sy_cmd->add_option("--population", population, "factor: loading rows (default 2n)");
  sy_cmd->add_option("--rho0", r0);
  sy_cmd->add_option("--rho1", r1);
  sy_cmd->add_option("--seed", seed, "root seed (generated and echoed if omitted)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "brute-force sharp bounds for small matrices");
  add_common(orc, c, true);
  orc->add_option("--y1", y1)->required()->check(CLI::ExistingFile);
  orc->add_option("--y0", y0)->required()->check(CLI::ExistingFile);
  auto* orc_t1 = orc->add_option("--t1", ht1);
  auto* orc_t0 = orc->add_option("--t0", ht0);
  orc_t1->needs(orc_t0);
  orc_t0->needs(orc_t1);
  auto* orc_y = orc->add_option("--y", hy, "DTE effect value")->excludes(orc_t1);
  (void)orc_y;

  // density
  std::string bins1, bins0;
  int points = 401;
  auto* den = app.add_subcommand("density", "STE or binned CATE samples and a Gaussian density grid");
  add_common(den, c, false);
  den->add_option("--y1", y1)->required()->check(CLI::ExistingFile);
  den->add_option("--y0", y0)->required()->check(CLI::ExistingFile);
  den->add_option("--basis", basis)->check(CLI::IsMember(bases));
  auto* den_b1 = den->add_option("--bins1", bins1, "treated bin labels: switches to binned CATE")
                     ->check(CLI::ExistingFile);
  auto* den_b0 = den->add_option("--bins0", bins0, "untreated bin labels")->check(CLI::ExistingFile);
  den_b1->needs(den_b0);
  den_b0->needs(den_b1);
  den->add_option("--samples-out", samples_out, "write (value, weight) samples CSV")->required();
  den->add_option("--bandwidth", h, "Gaussian bandwidth (default 1.06 sd m^(-1/5))")->check(CLI::PositiveNumber);
  den->add_option("--points", points)->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const CsvOptions csv = c.csv();
    const BoundsOptions bopts = c.bounds();

    if (dpo->parsed()) {
      const auto m1 = read_outcome_csv(y1, 1, csv);
      const auto m0 = read_outcome_csv(y0, 0, csv);
      auto doc = new_doc("dpo", {y1, y0}, c);
      doc.parameters["t1"] = t1;
      doc.parameters["t0"] = t0;
      doc.payload = interval_json(dpo_bounds(m1, m0, t1, t0, bopts));
      emit(doc, c);
    } else if (dte->parsed()) {
      auto doc = new_doc("dte", {y1, y0}, c);
      doc.parameters["grid"] = grid;
      doc.parameters["monotonize"] = monotonize;
      const Matrix g1 = read_csv_grid(y1, csv);
      const Matrix g0 = read_csv_grid(y0, csv);
      Json rows = Json::array();
      if (g1.cols() == 1 && g0.cols() == 1) {
        // Scalar outcomes: Makarov bounds.
        const OutcomeVector v1(flatten(g1), 1);
        const OutcomeVector v0(flatten(g0), 0);
        doc.parameters["outcomes"] = "vector";
        for (double v : grid) {
          Json r = interval_json(makarov_bounds(v1, v0, v));
          r["y"] = v;
          rows.push_back(std::move(r));
        }
      } else {
        const auto curve = dte_curve(read_outcome_csv(y1, 1, csv), read_outcome_csv(y0, 0, csv),
                                     grid, monotonize, bopts);
        for (std::size_t k = 0; k < curve.grid.size(); ++k)
          rows.push_back(Json{{"y", curve.grid[k]}, {"lower", curve.lower[k]}, {"upper", curve.upper[k]}});
      }
      doc.payload["curve"] = std::move(rows);
      emit(doc, c);
    } else if (cells->parsed()) {
      std::vector<std::pair<fs::path, fs::path>> list;
      if (!pairs.empty())
        list = read_pair_list(pairs);
      else if (!y1.empty())
        list.emplace_back(y1, y0);
      else
        throw Error("cells: give --y1/--y0 or --pairs");
      std::vector<fs::path> inputs;
      std::vector<CellBounds> per;
      std::vector<double> w;
      for (const auto& [a, b] : list) {
        inputs.push_back(a);
        inputs.push_back(b);
        const auto m1 = read_outcome_csv(a, 1, csv);
        const auto m0 = read_outcome_csv(b, 0, csv);
        per.push_back(binary_cell_bounds(m1, m0, bopts));
        w.push_back(static_cast<double>(m0.size()));
      }
      if (!weights.empty()) {
        inputs.emplace_back(weights);
        w = flatten(read_csv_grid(weights, csv));
        if (w.size() != per.size())
          throw Error("cells: " + std::to_string(w.size()) + " weights for " +
                      std::to_string(per.size()) + " networks");
      }
      auto doc = new_doc("cells", inputs, c);
      doc.parameters["networks"] = per.size();
      doc.parameters["weights"] = w;
      auto avg = [&](IntervalBound CellBounds::*field) {
        std::vector<IntervalBound> v;
        for (const auto& cb : per) v.push_back(cb.*field);
        return weighted_average_bounds(v, w);
      };
      double wsum = 0.0, f1 = 0.0, f0 = 0.0;
      for (std::size_t k = 0; k < per.size(); ++k) {
        wsum += w[k];
        f1 += w[k] * per[k].f1_zero;
        f0 += w[k] * per[k].f0_zero;
      }
      if (!(wsum > 0.0)) throw Error("cells: weights must have a positive sum");
      Json out = Json::array();
      double lsum = 0.0, usum = 0.0;
      const std::pair<const char*, IntervalBound CellBounds::*> fields[] = {
          {"(1,1)", &CellBounds::c11}, {"(1,0)", &CellBounds::c10},
          {"(0,1)", &CellBounds::c01}, {"(0,0)", &CellBounds::c00}};
      for (const auto& [name, field] : fields) {
        const auto b = avg(field);
        lsum += b.lower;
        usum += b.upper;
        Json r{{"cell", name}};
        r.update(interval_json(b));
        out.push_back(std::move(r));
      }
      doc.payload["cells"] = std::move(out);
      doc.payload["lower_sum"] = lsum;
      doc.payload["upper_sum"] = usum;
      doc.payload["f1_zero"] = f1 / wsum;
      doc.payload["f0_zero"] = f0 / wsum;
      emit(doc, c);
    } else if (ste_cmd->parsed()) {
      const auto m1 = read_outcome_csv(y1, 1, csv);
      const auto m0 = read_outcome_csv(y0, 0, csv);
      const auto s = parse_basis(basis) == BasisTag::Treated ? stt(m1, m0) : stu(m1, m0);
      auto doc = new_doc("ste", {y1, y0}, c);
      doc.parameters["basis"] = basis;
      doc.payload["basis"] = to_string(s.basis_tag);
      doc.payload["eigengap_warning"] = s.eigengap_warning;
      doc.payload["frobenius_norm"] = s.entries.norm();
      const auto gap = hw_gap(m1, m0);
      doc.payload["hw_gap"] = Json{{"lhs", gap.lhs}, {"rhs", gap.rhs}};
      const auto ri = rank_invariance_check(m1, m0);
      doc.payload["rank_invariance"] = Json{{"invariant", ri.invariant},
                                            {"max_eigenvector_misalignment", ri.max_eigenvector_misalignment},
                                            {"g_monotonicity_violation", ri.g_monotonicity_violation},
                                            {"eigengap_warning", ri.eigengap_warning}};
      doc.payload["entries"] = matrix_json(s.entries);
      if (nonextrap) {
        const auto wr = non_extrapolative_weights(m1, m0);
        doc.payload["non_extrapolative"] = Json{{"objective", wr.objective},
                                                {"iterations", wr.iterations},
                                                {"converged", wr.converged},
                                                {"weights", matrix_json(wr.weights)}};
      }
      if (!matrix_out.empty()) write_matrix_csv(s.entries, matrix_out, c.delimiter);
      emit(doc, c);
    } else if (het->parsed()) {
      const auto m1 = read_outcome_csv(y1, 1, csv);
      const auto m0 = read_outcome_csv(y0, 0, csv);
      auto doc = new_doc("hetero", {y1, y0}, c);
      doc.parameters["mode"] = mode;
      if (ht1) {
        doc.parameters["t1"] = *ht1;
        doc.parameters["t0"] = *ht0;
        doc.payload = interval_json(dpo_bounds_hetero(m1, m0, *ht1, *ht0, parse_mode(mode), bopts));
      } else if (hy) {
        doc.parameters["y"] = *hy;
        doc.payload = interval_json(dte_bounds_hetero(m1, m0, *hy, parse_mode(mode), bopts));
      } else if (!hbasis.empty()) {
        doc.parameters["basis"] = hbasis;
        const auto s = ste_hetero(m1, m0, parse_basis(hbasis));
        doc.payload["eigengap_warning"] = s.eigengap_warning;
        doc.payload["entries"] = matrix_json(s.entries);
      } else {
        throw Error("hetero: give --t1/--t0, --y or --ste");
      }
      emit(doc, c);
    } else if (bip->parsed()) {
      const BipartiteMatrix m1(read_csv_grid(y1, csv));
      const BipartiteMatrix m0(read_csv_grid(y0, csv));
      if (m1.rows() != m0.rows() || m1.cols() != m0.cols())
        throw Error("bipartite: arms must have the same shape");
      auto doc = new_doc("bipartite", {y1, y0}, c);
      doc.parameters["t1"] = t1;
      doc.parameters["t0"] = t0;
      const auto sym = dpo_bounds(symmetrize(m1), symmetrize(m0), t1, t0, bopts);
      doc.payload["symmetrized"] = interval_json(sym);
      doc.payload["unmapped"] = interval_json(bipartite_cell_unmap(sym, t1, t0, m1.rows(), m1.cols()));
      emit(doc, c);
    } else if (rt->parsed()) {
      const std::uint64_t s = seed ? *seed : fresh_seed();
      std::vector<fs::path> inputs;
      TestReport rep;
      if (design == "matchedPair") {
        if (pairs.empty()) throw Error("randtest matchedPair: --pairs is required");
        std::vector<std::pair<OutcomeMatrix, OutcomeMatrix>> mp;
        for (const auto& [a, b] : read_pair_list(pairs)) {
          inputs.push_back(a);
          inputs.push_back(b);
          mp.emplace_back(read_outcome_csv(a, 1, csv), read_outcome_csv(b, 0, csv));
        }
        rep = matched_pair_test(mp, resamples, s);
      } else if (design == "conjunctive") {
        if (ymat.empty() || buyers.empty() || sellers.empty())
          throw Error("randtest conjunctive: --y, --buyers and --sellers are required");
        inputs = {ymat, buyers, sellers};
        rep = conjunctive_test(BipartiteMatrix(read_csv_grid(ymat, csv)), read_labels(buyers, csv),
                               read_labels(sellers, csv), pi, resamples, s);
      } else {
        if (y1.empty() || y0.empty()) throw Error("randtest censored: --y1 and --y0 are required");
        inputs = {y1, y0};
        rep = censored_test(read_outcome_csv(y1, 1, csv), read_outcome_csv(y0, 0, csv), pi, resamples, s);
      }
      auto doc = new_doc("randtest", inputs, c);
      doc.parameters.erase("exclude_diagonal");
      doc.parameters["design"] = design;
      if (design != "matchedPair") doc.parameters["pi"] = pi;
      doc.parameters["A"] = resamples;
      doc.parameters["seed"] = s;
      doc.parameters["seed_generated"] = !seed.has_value();
      doc.payload = Json{{"statistic", rep.statistic}, {"p_value", rep.p_value}, {"redraws", rep.redraws}};
      emit(doc, c);
    } else if (sm->parsed()) {
      const auto m1 = read_outcome_csv(y1, 1, csv);
      const auto m0 = read_outcome_csv(y0, 0, csv);
      auto doc = new_doc("smooth", {y1, y0}, c);
      const SmoothKernel k(parse_kernel(sm->count("--kernel") ? kernel
                                        : sy ? "symmetricQuartic" : "oneSidedQuintic"));
      doc.parameters["kernel"] = to_string(k.kind());
      if (ht1) {
        const double bw = h > 0.0 ? h
                                  : std::max(default_bandwidth(m1.entries()), default_bandwidth(m0.entries()));
        doc.parameters["t1"] = *ht1;
        doc.parameters["t0"] = *ht0;
        doc.parameters["h"] = bw;
        doc.payload = interval_json(smoothed_dpo_bounds(m1, m0, *ht1, *ht0, bw, k, bopts));
      } else if (sy) {
        const BasisTag tag = parse_basis(basis);
        const Matrix e = (tag == BasisTag::Treated ? stt(m1, m0) : stu(m1, m0)).entries;
        const double bw = h > 0.0 ? h : default_bandwidth(e);
        doc.parameters["y"] = *sy;
        doc.parameters["basis"] = basis;
        doc.parameters["h"] = bw;
        doc.payload["cdf"] = smoothed_cdf(e, *sy, bw, k);
      } else {
        throw Error("smooth: give --t1/--t0 or --y");
      }
      emit(doc, c);
    } else if (sy_cmd->parsed()) {
      const std::uint64_t s = seed ? *seed : fresh_seed();
      ResultDocument doc;
      doc.kind = "synth";
      std::vector<fs::path> inputs;
      if (!graph.empty()) inputs.emplace_back(graph);
      doc.inputs_digest = digest_files(inputs);
      doc.parameters["generator"] = generator;
      doc.parameters["seed"] = s;
      doc.parameters["seed_generated"] = !seed.has_value();

      auto load_graph = [&] {
        if (!graph.empty()) return read_csv_grid(graph, csv);
        doc.parameters["n"] = n;
        doc.parameters["p"] = p;
        return random_graph(n, p, s);
      };
      auto rng = substream(s, 3);
      std::normal_distribution<double> normal;
      GeneratedExperiment e;
      if (generator == "diffusion") {
        doc.parameters["alpha0"] = a0;
        doc.parameters["alpha1"] = a1;
        doc.parameters["periods"] = periods;
        e = gen_diffusion(load_graph(), a0, a1, periods, s);
      } else if (generator == "social") {
        const Matrix g = load_graph();
        const double lmax = eig_values(g).cwiseAbs().maxCoeff() * static_cast<double>(g.rows());
        const double lo = b0 > 0.0 ? b0 : 0.2 / lmax;
        const double hi = b1 > 0.0 ? b1 : 0.5 / lmax;
        doc.parameters["beta0"] = lo;
        doc.parameters["beta1"] = hi;
        doc.parameters["sigma2"] = sigma2;
        e = gen_social(g, lo, hi, sigma2, s);
      } else if (generator == "linkformation") {
        const int k = features > 0 ? features : n;
        Matrix x(n, k);
        for (Index i = 0; i < x.rows(); ++i)
          for (Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
        const double lo = b0 > 0.0 ? b0 : 0.4;
        const double hi = b1 > 0.0 ? b1 : 0.9;
        doc.parameters["n"] = n;
        doc.parameters["features"] = k;
        doc.parameters["beta0"] = lo;
        doc.parameters["beta1"] = hi;
        e = gen_linkformation(x, lo, hi, s);
      } else {
        const int rows = population > 0 ? population : 2 * n;
        if (rows < n) throw Error("synth factor: --population must be at least --n");
        Matrix z(rows, n);
        for (Index i = 0; i < z.rows(); ++i)
          for (Index j = 0; j < z.cols(); ++j) z(i, j) = normal(rng);
        Matrix loadings = Eigen::HouseholderQR<Matrix>(z).householderQ() * Matrix::Identity(rows, n);
        for (Index j = 0; j < n; ++j) loadings.col(j) *= 1.0 + 0.1 * static_cast<double>(j);
        Vector s2(rows);
        std::uniform_real_distribution<double> unif(0.5, 1.5);
        for (Index i = 0; i < rows; ++i) s2(i) = sigma2 * unif(rng);
        doc.parameters["n"] = n;
        doc.parameters["population"] = rows;
        doc.parameters["rho0"] = r0;
        doc.parameters["rho1"] = r1;
        e = gen_factor(loadings, s2, r0, r1, s);
      }
      const fs::path dir(outdir);
      fs::create_directories(dir);
      write_matrix_csv(e.y1_star.entries(), dir / "y1_star.csv");
      write_matrix_csv(e.y0_star.entries(), dir / "y0_star.csv");
      write_matrix_csv(e.y1_obs.entries(), dir / "y1_obs.csv");
      write_matrix_csv(e.y0_obs.entries(), dir / "y0_obs.csv");
      doc.payload = Json{{"rank_invariant", e.rank_invariant},
                         {"warning", e.warning},
                         {"description", e.g_description},
                         {"perm1", perm_json(e.perm1)},
                         {"perm0", perm_json(e.perm0)},
                         {"files", {"y1_star.csv", "y0_star.csv", "y1_obs.csv", "y0_obs.csv"}}};
      emit(doc, c);
    } else if (orc->parsed()) {
      const Matrix g1 = read_csv_grid(y1, csv);
      const Matrix g0 = read_csv_grid(y0, csv);
      auto doc = new_doc("oracle", {y1, y0}, c);
      SharpInterval si;
      if (ht1) {
        doc.parameters["t1"] = *ht1;
        doc.parameters["t0"] = *ht0;
        if (g1.rows() == g1.cols() && g0.rows() == g0.cols())
          si = qap_sharp_dpo(indicator(read_outcome_csv(y1, 1, csv), *ht1).entries,
                             indicator(read_outcome_csv(y0, 0, csv), *ht0).entries, c.exclude_diagonal);
        else
          si = bipartite_sharp_dpo(indicator(g1, *ht1).entries, indicator(g0, *ht0).entries);
      } else if (hy) {
        doc.parameters["y"] = *hy;
        si = brute_dte_sharp(read_outcome_csv(y1, 1, csv).entries(), read_outcome_csv(y0, 0, csv).entries(), *hy);
      } else {
        throw Error("oracle: give --t1/--t0 or --y");
      }
      doc.payload = Json{{"min", si.min}, {"max", si.max}, {"argmin_perm", perm_json(si.argmin_perm)},
                         {"argmax_perm", perm_json(si.argmax_perm)}};
      emit(doc, c);
    } else if (den->parsed()) {
      const auto m1 = read_outcome_csv(y1, 1, csv);
      const auto m0 = read_outcome_csv(y0, 0, csv);
      std::vector<fs::path> inputs{y1, y0};
      std::vector<double> values, wts;
      if (!bins1.empty()) {
        inputs.emplace_back(bins1);
        inputs.emplace_back(bins0);
        for (const auto& cell : binned_cate(m1, m0, read_labels(bins1, csv), read_labels(bins0, csv))) {
          values.push_back(cell.value);
          wts.push_back(cell.weight);
        }
      } else {
        const Matrix e = (parse_basis(basis) == BasisTag::Treated ? stt(m1, m0) : stu(m1, m0)).entries;
        values = flatten(e);
        wts.assign(values.size(), 1.0);
      }
      auto doc = new_doc("density", inputs, c);
      doc.parameters.erase("exclude_diagonal");
      doc.parameters["source"] = bins1.empty() ? "ste" : "cate";
      if (bins1.empty()) doc.parameters["basis"] = basis;
      write_density_samples(values, wts, samples_out);
      doc.payload["samples"] = values.size();
      if (!values.empty()) {
        double bw = h;
        if (!(bw > 0.0)) {
          double wsum = 0.0, mean = 0.0, var = 0.0;
          for (std::size_t k = 0; k < values.size(); ++k) {
            wsum += wts[k];
            mean += wts[k] * values[k];
          }
          mean /= wsum;
          for (std::size_t k = 0; k < values.size(); ++k) var += wts[k] * (values[k] - mean) * (values[k] - mean);
          const double sd = std::sqrt(var / wsum);
          bw = 1.06 * (sd > 0.0 ? sd : 1.0) * std::pow(static_cast<double>(values.size()), -0.2);
        }
        doc.parameters["h"] = bw;
        const auto grid_out = gaussian_density_grid(values, wts, bw, points);
        doc.payload["x"] = grid_out.x;
        doc.payload["density"] = grid_out.density;
      }
      emit(doc, c);
    }
  } catch (const std::exception& e) {
    std::cerr << "specdte: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
