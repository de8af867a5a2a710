#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "icindex/errors.hpp"
#include "icindex/metrics.hpp"

namespace py = pybind11;
using namespace icindex;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Ids as uint32 codes. A contiguous uint32 array is viewed in place; anything
// else goes through int64 so negative values can be rejected.
struct IdColumn {
  std::span<const std::uint32_t> codes;
  std::vector<std::uint32_t> storage;
  py::object keepalive;
  std::uint32_t bound = 0;  // max id + 1
};

IdColumn id_column(const py::array& raw, const char* what) {
  if (raw.ndim() != 1) throw py::value_error(std::string(what) + " must be one-dimensional");
  IdColumn col;
  if (raw.size() == 0) return col;
  if (raw.dtype().is(py::dtype::of<std::uint32_t>()) && (raw.flags() & py::array::c_style)) {
    auto arr = py::array_t<std::uint32_t, py::array::c_style>::ensure(raw);
    col.keepalive = arr;
    col.codes = {arr.data(), static_cast<std::size_t>(arr.size())};
  } else {
    if (raw.dtype().kind() != 'i' && raw.dtype().kind() != 'u') {
      throw py::type_error(std::string(what) + " must hold integers");
    }
    auto arr = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>::ensure(raw);
    col.storage.reserve(static_cast<std::size_t>(arr.size()));
    const std::int64_t* p = arr.data();
    for (py::ssize_t i = 0; i < arr.size(); ++i) {
      if (p[i] < 0 || p[i] >= std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidValue(std::string(what) + " out of range at position " + std::to_string(i));
      }
      col.storage.push_back(static_cast<std::uint32_t>(p[i]));
    }
    col.codes = col.storage;
  }
  for (std::uint32_t c : col.codes) col.bound = std::max(col.bound, c + 1);
  return col;
}

std::span<const double> real_span(const RealArray& a, const char* what) {
  if (a.ndim() != 1) throw py::value_error(std::string(what) + " must be one-dimensional");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

MetricOptions make_options(double tie_tolerance, const std::string& averaging, const std::string& orientation,
                           unsigned threads) {
  MetricOptions o;
  o.tie_tolerance = tie_tolerance;
  o.threads = threads;
  if (averaging == "pooled") {
    o.averaging = Averaging::Pooled;
  } else if (averaging == "macro") {
    o.averaging = Averaging::Macro;
  } else {
    throw py::value_error("averaging must be 'pooled' or 'macro'");
  }
  if (orientation == "auto") {
    o.orientation = Orientation::Auto;
  } else if (orientation == "drug") {
    o.orientation = Orientation::DrugPairs;
  } else if (orientation == "target") {
    o.orientation = Orientation::TargetPairs;
  } else {
    throw py::value_error("orientation must be 'auto', 'drug' or 'target'");
  }
  return o;
}

py::tuple metric(const std::string& name, const py::array& drug_ids, const py::array& target_ids,
                 const RealArray& y, const RealArray& pred, double tie_tolerance, const std::string& averaging,
                 const std::string& orientation, unsigned threads) {
  const auto kind = parse_metric(name);
  if (!kind) throw py::value_error("unknown metric '" + name + "'");
  const MetricOptions options = make_options(tie_tolerance, averaging, orientation, threads);
  const IdColumn drugs = id_column(drug_ids, "drug_ids");
  const IdColumn targets = id_column(target_ids, "target_ids");
  const auto labels = real_span(y, "y");
  const auto predictions = real_span(pred, "pred");

  MetricReport r;
  {
    py::gil_scoped_release release;
    const TripletView view{drugs.codes, targets.codes, labels, drugs.bound, targets.bound};
    validate_triplets(view);
    r = evaluate(*kind, view, predictions, options);
  }
  return py::make_tuple(r.value, r.numerator, r.denominator, r.defaulted);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native kernels for drug-target affinity evaluation metrics.";
  m.attr("__version__") = ICINDEX_VERSION;

  auto base = py::register_exception<Error>(m, "IcindexError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<DuplicatePair>(m, "DuplicatePairError", base.ptr());
  py::register_exception<InvalidValue>(m, "InvalidValueError", base.ptr());
  py::register_exception<AlignmentError>(m, "AlignmentError", base.ptr());
  py::register_exception<SizeLimit>(m, "SizeLimitError", base.ptr());

  m.def("metric", &metric, py::arg("name"), py::arg("drug_ids"), py::arg("target_ids"), py::arg("y"),
        py::arg("pred"), py::kw_only(), py::arg("tie_tolerance") = 0.0, py::arg("averaging") = "pooled",
        py::arg("orientation") = "auto", py::arg("threads") = 1u,
        "Evaluate one metric over flat id/label/prediction arrays.\n\n"
        "Returns (value, numerator, denominator, defaulted).");

  m.def(
      "decompose_2x2",
      [](const Matrix2x2& cells) {
        const auto e = decompose_2x2(cells);
        return py::make_tuple(e.grand_mean, e.drug_main, e.target_main, e.interaction);
      },
      py::arg("cells"), "Split [[y(d,t), y(d,t*)], [y(d',t), y(d',t*)]] into (grand, drug, target, interaction).");
}
