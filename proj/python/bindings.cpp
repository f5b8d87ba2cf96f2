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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace specdte;
using namespace pybind11::literals;

namespace {

OutcomeMatrix om(const Matrix& m, int arm) { return OutcomeMatrix(m, arm); }

BasisTag basis_of(const std::string& s) {
  if (s == "treated") return BasisTag::Treated;
  if (s == "untreated") return BasisTag::Untreated;
  throw Error("basis must be 'treated' or 'untreated', got '" + s + "'");
}

HeteroMode mode_of(const std::string& s) {
  if (s == "conservative") return HeteroMode::Conservative;
  if (s == "paperExact") return HeteroMode::PaperExact;
  throw Error("mode must be 'conservative' or 'paperExact', got '" + s + "'");
}

SmoothKernel kernel_of(const std::string& s) {
  if (s == "oneSidedQuintic") return SmoothKernel(KernelKind::OneSidedQuintic);
  if (s == "symmetricQuartic") return SmoothKernel(KernelKind::SymmetricQuartic);
  throw Error("kernel must be 'oneSidedQuintic' or 'symmetricQuartic', got '" + s + "'");
}

py::dict report_dict(const TestReport& r) {
  return py::dict("statistic"_a = r.statistic, "resampled"_a = r.resampled, "p_value"_a = r.p_value,
                  "seed"_a = r.seed, "design"_a = std::string(to_string(r.design)),
                  "redraws"_a = r.redraws);
}

py::dict experiment_dict(const GeneratedExperiment& e) {
  return py::dict("y1_star"_a = e.y1_star.entries(), "y0_star"_a = e.y0_star.entries(),
                  "y1_obs"_a = e.y1_obs.entries(), "y0_obs"_a = e.y0_obs.entries(),
                  "perm1"_a = e.perm1, "perm0"_a = e.perm0, "description"_a = e.g_description,
                  "rank_invariant"_a = e.rank_invariant, "warning"_a = e.warning);
}

py::dict sharp_dict(const SharpInterval& s) {
  return py::dict("min"_a = s.min, "max"_a = s.max, "argmin_perm"_a = s.argmin_perm,
                  "argmax_perm"_a = s.argmax_perm);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral bounds and treatment effects for pairwise outcome matrices";
  m.attr("__version__") = std::string(kLibraryVersion);

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<IntervalBound>(m, "Interval")
      .def_readonly("lower", &IntervalBound::lower)
      .def_readonly("upper", &IntervalBound::upper)
      .def_property_readonly("binding_lower",
                             [](const IntervalBound& b) { return std::string(to_string(b.binding_lower)); })
      .def_property_readonly("binding_upper",
                             [](const IntervalBound& b) { return std::string(to_string(b.binding_upper)); })
      .def_readonly("clipped", &IntervalBound::clipped)
      .def("__repr__", [](const IntervalBound& b) {
        return "Interval(" + std::to_string(b.lower) + ", " + std::to_string(b.upper) + ")";
      });

  // spectra
  m.def("eig_sorted", [](const Matrix& y) {
    const auto s = eig_sorted(OutcomeMatrix(y));
    return py::make_tuple(s.values, s.vectors);
  }, "y"_a, "Normalized signed-descending eigenvalues and eigenvectors of a symmetric matrix.");
  m.def("threshold_grid", [](const Matrix& a, const Matrix& b) { return threshold_grid(a, b); });

  // scalar baseline
  m.def("fh_bounds", &fh_bounds, "f1"_a, "f0"_a);
  m.def("makarov_bounds", [](const std::vector<double>& y1, const std::vector<double>& y0, double y) {
    return makarov_bounds(OutcomeVector(y1, 1), OutcomeVector(y0, 0), y);
  }, "y1"_a, "y0"_a, "y"_a);
  m.def("qte", [](const std::vector<double>& y1, const std::vector<double>& y0, double u) {
    return qte(OutcomeVector(y1, 1), OutcomeVector(y0, 0), u);
  }, "y1"_a, "y0"_a, "u"_a);

  // bounds
  m.def("dpo_bounds", [](const Matrix& y1, const Matrix& y0, double t1, double t0, bool exclude_diagonal) {
    return dpo_bounds(om(y1, 1), om(y0, 0), t1, t0, {exclude_diagonal});
  }, "y1"_a, "y0"_a, "t1"_a, "t0"_a, "exclude_diagonal"_a = false);
  m.def("dte_bounds", [](const Matrix& y1, const Matrix& y0, double y, bool exclude_diagonal) {
    return dte_bounds(om(y1, 1), om(y0, 0), y, {exclude_diagonal});
  }, "y1"_a, "y0"_a, "y"_a, "exclude_diagonal"_a = false);
  m.def("dte_curve", [](const Matrix& y1, const Matrix& y0, const std::vector<double>& grid,
                        bool monotonize, bool exclude_diagonal) {
    const auto c = dte_curve(om(y1, 1), om(y0, 0), grid, monotonize, {exclude_diagonal});
    return py::dict("grid"_a = c.grid, "lower"_a = c.lower, "upper"_a = c.upper,
                    "monotonized"_a = c.monotonized);
  }, "y1"_a, "y0"_a, "grid"_a, "monotonize"_a = false, "exclude_diagonal"_a = false);
  m.def("binary_cell_bounds", [](const Matrix& y1, const Matrix& y0, bool exclude_diagonal) {
    const auto c = binary_cell_bounds(om(y1, 1), om(y0, 0), {exclude_diagonal});
    return py::dict("11"_a = c.c11, "10"_a = c.c10, "01"_a = c.c01, "00"_a = c.c00,
                    "f1_zero"_a = c.f1_zero, "f0_zero"_a = c.f0_zero);
  }, "y1"_a, "y0"_a, "exclude_diagonal"_a = false);
  m.def("weighted_average_bounds", [](const std::vector<IntervalBound>& b, const std::vector<double>& w) {
    return weighted_average_bounds(b, w);
  }, "bounds"_a, "weights"_a);

  // spectral treatment effects
  m.def("stt", [](const Matrix& y1, const Matrix& y0) { return stt(om(y1, 1), om(y0, 0)).entries; });
  m.def("stu", [](const Matrix& y1, const Matrix& y0) { return stu(om(y1, 1), om(y0, 0)).entries; });
  m.def("ste", [](const Matrix& y1, const Matrix& y0, const Matrix& basis) {
    return ste(om(y1, 1), om(y0, 0), basis).entries;
  }, "y1"_a, "y0"_a, "basis"_a);
  m.def("counterfactual_weights", [](const Matrix& y1, const Matrix& y0) {
    return counterfactual_weights(om(y1, 1), om(y0, 0));
  });
  m.def("matrix_lift", [](const std::function<double(double)>& g, const Matrix& y) {
    return matrix_lift(g, y);
  }, "g"_a, "y"_a);
  m.def("hw_gap", [](const Matrix& y1, const Matrix& y0) {
    const auto g = hw_gap(om(y1, 1), om(y0, 0));
    return py::make_tuple(g.lhs, g.rhs);
  });
  m.def("rank_invariance_check", [](const Matrix& y1, const Matrix& y0, double tol) {
    const auto r = rank_invariance_check(om(y1, 1), om(y0, 0), tol);
    return py::dict("invariant"_a = r.invariant,
                    "max_eigenvector_misalignment"_a = r.max_eigenvector_misalignment,
                    "g_monotonicity_violation"_a = r.g_monotonicity_violation,
                    "eigengap_warning"_a = r.eigengap_warning);
  }, "y1"_a, "y0"_a, "tol"_a = 1e-8);
  m.def("non_extrapolative_weights", [](const Matrix& y1, const Matrix& y0, int max_iter, double tol) {
    const auto r = non_extrapolative_weights(om(y1, 1), om(y0, 0), max_iter, tol);
    return py::dict("weights"_a = r.weights, "objective"_a = r.objective,
                    "objective_trace"_a = r.objective_trace, "iterations"_a = r.iterations,
                    "converged"_a = r.converged);
  }, "y1"_a, "y0"_a, "max_iter"_a = 500, "tol"_a = 1e-8);

  // heterogeneity
  m.def("decompose_additive", [](const Matrix& y) {
    const auto d = decompose_additive(y);
    return py::make_tuple(d.alpha, d.epsilon);
  });
  m.def("dpo_bounds_hetero", [](const Matrix& y1, const Matrix& y0, double t1, double t0,
                                const std::string& mode, bool exclude_diagonal) {
    return dpo_bounds_hetero(om(y1, 1), om(y0, 0), t1, t0, mode_of(mode), {exclude_diagonal});
  }, "y1"_a, "y0"_a, "t1"_a, "t0"_a, "mode"_a = "conservative", "exclude_diagonal"_a = false);
  m.def("dte_bounds_hetero", [](const Matrix& y1, const Matrix& y0, double y, const std::string& mode,
                                bool exclude_diagonal) {
    return dte_bounds_hetero(om(y1, 1), om(y0, 0), y, mode_of(mode), {exclude_diagonal});
  }, "y1"_a, "y0"_a, "y"_a, "mode"_a = "conservative", "exclude_diagonal"_a = false);
  m.def("ste_hetero", [](const Matrix& y1, const Matrix& y0, const std::string& basis) {
    return ste_hetero(om(y1, 1), om(y0, 0), basis_of(basis)).entries;
  }, "y1"_a, "y0"_a, "basis"_a = "treated");

  // bipartite
  m.def("symmetrize", [](const Matrix& b) { return symmetrize(BipartiteMatrix(b)).entries(); });
  m.def("bipartite_dpo_bounds", [](const Matrix& b1, const Matrix& b0, double t1, double t0) {
    const BipartiteMatrix m1(b1), m0(b0);
    if (m1.rows() != m0.rows() || m1.cols() != m0.cols())
      throw Error("bipartite_dpo_bounds: arms must have the same shape");
    const auto sym = dpo_bounds(symmetrize(m1), symmetrize(m0), t1, t0);
    return bipartite_cell_unmap(sym, t1, t0, m1.rows(), m1.cols());
  }, "b1"_a, "b0"_a, "t1"_a, "t0"_a);

  // randomization tests
  m.def("matched_pair_test", [](const std::vector<std::pair<Matrix, Matrix>>& pairs, int resamples,
                                std::uint64_t seed) {
    std::vector<std::pair<OutcomeMatrix, OutcomeMatrix>> mp;
    for (const auto& [a, b] : pairs) mp.emplace_back(om(a, 1), om(b, 0));
    return report_dict(matched_pair_test(mp, resamples, seed));
  }, "pairs"_a, "resamples"_a, "seed"_a);
  m.def("conjunctive_test", [](const Matrix& y, const std::vector<int>& buyers, const std::vector<int>& sellers,
                               double pi, int resamples, std::uint64_t seed) {
    return report_dict(conjunctive_test(BipartiteMatrix(y), buyers, sellers, pi, resamples, seed));
  }, "y"_a, "buyer_groups"_a, "seller_groups"_a, "pi"_a, "resamples"_a, "seed"_a);
  m.def("censored_test", [](const Matrix& y1, const Matrix& y0, double pi, int resamples, std::uint64_t seed) {
    return report_dict(censored_test(om(y1, 1), om(y0, 0), pi, resamples, seed));
  }, "y1"_a, "y0"_a, "pi"_a, "resamples"_a, "seed"_a);

  // smoothing
  m.def("smoothed_dpo_bounds", [](const Matrix& y1, const Matrix& y0, double t1, double t0, double h,
                                  const std::string& kernel, bool exclude_diagonal) {
    return smoothed_dpo_bounds(om(y1, 1), om(y0, 0), t1, t0, h, kernel_of(kernel), {exclude_diagonal});
  }, "y1"_a, "y0"_a, "t1"_a, "t0"_a, "h"_a, "kernel"_a = "oneSidedQuintic", "exclude_diagonal"_a = false);
  m.def("smoothed_ste_cdf", [](const Matrix& y1, const Matrix& y0, const std::string& basis, double y,
                               double h, const std::string& kernel) {
    return smoothed_ste_cdf(om(y1, 1), om(y0, 0), basis_of(basis), y, h, kernel_of(kernel));
  }, "y1"_a, "y0"_a, "basis"_a, "y"_a, "h"_a, "kernel"_a = "symmetricQuartic");
  m.def("default_bandwidth", [](const Matrix& y) { return default_bandwidth(y); });

  // oracles
  m.def("qap_sharp_dpo", [](const Matrix& a1, const Matrix& a0, bool exclude_diagonal) {
    return sharp_dict(qap_sharp_dpo(a1, a0, exclude_diagonal));
  }, "a1"_a, "a0"_a, "exclude_diagonal"_a = false);
  m.def("brute_dte_sharp", [](const Matrix& y1, const Matrix& y0, double y) {
    return sharp_dict(brute_dte_sharp(y1, y0, y));
  }, "y1"_a, "y0"_a, "y"_a);
  m.def("bipartite_sharp_dpo", [](const Matrix& a1, const Matrix& a0) {
    return sharp_dict(bipartite_sharp_dpo(a1, a0));
  }, "a1"_a, "a0"_a);

  // synthetic experiments
  m.def("random_graph", &random_graph, "n"_a, "p"_a, "seed"_a);
  m.def("gen_diffusion", [](const Matrix& g, double a0, double a1, int periods, std::uint64_t seed) {
    return experiment_dict(gen_diffusion(g, a0, a1, periods, seed));
  }, "g"_a, "alpha0"_a, "alpha1"_a, "periods"_a, "seed"_a);
  m.def("gen_social", [](const Matrix& g, double b0, double b1, double sigma2, std::uint64_t seed) {
    return experiment_dict(gen_social(g, b0, b1, sigma2, seed));
  }, "g"_a, "beta0"_a, "beta1"_a, "sigma2"_a, "seed"_a);
  m.def("gen_linkformation", [](const Matrix& x, double b0, double b1, std::uint64_t seed) {
    return experiment_dict(gen_linkformation(x, b0, b1, seed));
  }, "x"_a, "beta0"_a, "beta1"_a, "seed"_a);
  m.def("gen_factor", [](const Matrix& loadings, const Vector& sigma2, double r0, double r1, std::uint64_t seed) {
    return experiment_dict(gen_factor(loadings, sigma2, r0, r1, seed));
  }, "loadings"_a, "sigma2"_a, "rho0"_a, "rho1"_a, "seed"_a);

  // io
  m.def("read_csv", [](const std::filesystem::path& p, bool header, char delimiter) {
    return read_csv_grid(p, {header, delimiter, kSymmetryTolerance});
  }, "path"_a, "header"_a = false, "delimiter"_a = ',');
  m.def("write_density_samples", &write_density_samples, "values"_a, "weights"_a, "path"_a);
}
