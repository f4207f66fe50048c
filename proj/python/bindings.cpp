#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gapcert/errors.hpp"
#include "gapcert/gap_bounds.hpp"
#include "gapcert/linalg.hpp"
#include "gapcert/model.hpp"
#include "gapcert/stokes.hpp"

namespace py = pybind11;
using namespace gapcert;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a 2-d array");
  const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
  std::vector<double> data(a.data(), a.data() + r * c);
  return Matrix(r, c, std::move(data));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  auto src = m.data();
  std::copy(src.begin(), src.end(), out.mutable_data());
  return out;
}

py::dict cert_dict(const GapCertificate& g) {
  py::dict d;
  d["method"] = std::string(to_string(g.method));
  d["interval"] = py::make_tuple(g.lo, g.hi);
  d["claim"] = std::string(to_string(g.claim));
  d["inv_norm_bound"] = g.inv_norm_bound ? py::object(py::float_(*g.inv_norm_bound)) : py::object(py::none());
  d["quantities"] = g.quantities;
  return d;
}

py::dict pair_dict(const IntervalPair& p) {
  py::dict d;
  d["source"] = std::string(to_string(p.source));
  d["i_minus"] = py::make_tuple(p.i_minus.lo, p.i_minus.hi);
  d["i_plus"] = py::make_tuple(p.i_plus.lo, p.i_plus.hi);
  return d;
}

BlockSaddle saddle(const Array& A, const Array& B, const Array& C) { return {to_matrix(A), to_matrix(B), to_matrix(C)}; }

ModelSpec spec(std::size_t m, double c) { return {m, c, std::nullopt}; }

}  // namespace

PYBIND11_MODULE(_gapcert, mod) {
  mod.doc() = "Spectral gap certificates for block matrices";

  py::register_exception<Error>(mod, "GapcertError", PyExc_ValueError);

  mod.def("sym_eigvals", [](const Array& M) { return sym_eigvals(to_matrix(M)); });
  mod.def("singular_values", [](const Array& M) { return singular_values(to_matrix(M)); });
  mod.def("op_norm", [](const Array& M) { return op_norm(to_matrix(M)); });
  mod.def(
      "bidiag_svd_hra",
      [](std::vector<double> diag, std::vector<double> offdiag, bool lower) {
        return bidiag_svd_hra({std::move(diag), std::move(offdiag), lower ? Orientation::Lower : Orientation::Upper});
      },
      py::arg("diag"), py::arg("offdiag"), py::arg("lower") = false);

  mod.def("diag_gap", [](const Array& A, const Array& B, const Array& C) { return cert_dict(diag_gap(saddle(A, B, C))); });
  mod.def("stretch_certificate",
          [](const Array& A, const Array& B, const Array& C) { return cert_dict(stretch_certificate(saddle(A, B, C))); });
  mod.def("hbinv_certificate",
          [](const Array& A, const Array& B, const Array& C) { return cert_dict(hbinv_certificate(saddle(A, B, C))); });
  mod.def("zero_dichotomy_certificate", [](const Array& A, const Array& B, const Array& C) {
    return cert_dict(zero_dichotomy_certificate(saddle(A, B, C)));
  });
  mod.def("kirsch_certificate",
          [](const Array& A, const Array& B) { return cert_dict(kirsch_certificate(to_matrix(A), to_matrix(B))); });
  mod.def("winklmeier_bound", [](const Array& A, const Array& B, const Array& C) { return winklmeier_bound(saddle(A, B, C)); });

  mod.def("minimal_intervals", [](const Array& A, const Array& B) { return pair_dict(minimal_intervals({to_matrix(A), to_matrix(B)})); });
  mod.def("ruwa_intervals", [](const Array& A, const Array& B) { return pair_dict(ruwa_intervals({to_matrix(A), to_matrix(B)})); });
  mod.def("axel_intervals", [](const Array& A, const Array& B) { return pair_dict(axel_intervals({to_matrix(A), to_matrix(B)})); });
  mod.def("new_gap_estimate", [](const Array& A, const Array& B) { return cert_dict(new_gap_estimate({to_matrix(A), to_matrix(B)})); });
  mod.def("pencil_spectrum", [](const Array& A, const Array& B) {
    auto ps = pencil_spectrum({to_matrix(A), to_matrix(B)});
    py::dict d;
    d["lambda_minus"] = ps.lambda_minus;
    d["lambda_plus"] = ps.lambda_plus;
    d["zero_multiplicity"] = ps.zero_multiplicity;
    return d;
  });

  mod.def("build_Hc", [](std::size_t m, double c) { return to_array(build_Hc(spec(m, c))); }, py::arg("m"), py::arg("c"));
  mod.def(
      "build_H_omega",
      [](std::size_t m, double a, double b, std::uint64_t seed) {
        return to_array(build_Hc({m, 0.0, UniformLaw{a, b, seed}}));
      },
      py::arg("m"), py::arg("a"), py::arg("b"), py::arg("seed"));
  mod.def(
      "build_modified",
      [](std::size_t m, double c) {
        auto mm = build_modified(spec(m, c));
        return py::make_tuple(to_array(mm.K_tilde), to_array(mm.H_tilde));
      },
      py::arg("m"), py::arg("c"));
  mod.def(
      "secular_solve",
      [](std::size_t m, double c) {
        auto r = secular_solve(spec(m, c));
        py::dict d;
        d["trig_roots"] = r.trig_roots;
        d["hyp_root"] = r.hyp_root ? py::object(py::make_tuple(r.hyp_root->alpha1, r.hyp_root->log_lambda1)) : py::object(py::none());
        d["alpha_hat"] = r.alpha_hat ? py::object(py::float_(*r.alpha_hat)) : py::object(py::none());
        d["eigenvalues"] = r.eigenvalues(c);
        return d;
      },
      py::arg("m"), py::arg("c"));
  mod.def(
      "spurious_estimate",
      [](std::size_t m, double c) {
        auto e = spurious_estimate(spec(m, c));
        py::dict d;
        d["alpha0"] = e.alpha0;
        d["log_lambda_est"] = e.log_lambda_est;
        d["log_sigma_est"] = e.log_sigma_est;
        d["log_lambda_first_order"] = e.log_lambda_first_order;
        d["log_sigma_first_order"] = e.log_sigma_first_order;
        return d;
      },
      py::arg("m"), py::arg("c"));
  mod.def("stable_gap_radius", [](double c) { return stable_gap(c).radius; });
  mod.def("modified_spectrum_closed_form", [](std::size_t m, double c) { return modified_spectrum_closed_form(spec(m, c)); });
  mod.def(
      "gap_scan",
      [](const std::vector<double>& M_list, double delta, std::size_t m, std::uint64_t seed) {
        py::list rows;
        for (const auto& r : gap_scan(M_list, delta, m, seed)) rows.append(py::make_tuple(r.M, r.variant, r.index, r.eigenvalue));
        return rows;
      },
      py::arg("M_list"), py::arg("delta"), py::arg("m"), py::arg("seed"));

  mod.def("counterexample_suite", []() {
    auto r = counterexample_suite();
    py::dict d;
    py::list om;
    for (const auto& row : r.omladic) om.append(py::make_tuple(row.t, row.inv_norm, row.closed_form));
    d["omladic"] = om;
    d["bottcher_norm"] = r.bottcher_norm;
    d["bottcher_inv_norm"] = r.bottcher_inv_norm;
    d["conjecture_violated"] = r.conjecture_violated;
    d["ballantine_residual"] = r.ballantine_residual;
    return d;
  });
}
