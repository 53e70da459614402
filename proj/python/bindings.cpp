#include <optional>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lvc/compression.hpp"
#include "lvc/error.hpp"
#include "lvc/oracle.hpp"
#include "lvc/parallel.hpp"
#include "lvc/pipeline.hpp"
#include "lvc/version.hpp"

namespace py = pybind11;

namespace {

using FloatArray = py::array_t<float, py::array::c_style>;

lvc::VideoFeatures to_features(const FloatArray& a, std::size_t tokens_per_frame) {
  std::size_t rows = 0, dim = 0;
  if (a.ndim() == 2) {
    rows = a.shape(0);
    dim = a.shape(1);
  } else if (a.ndim() == 3) {
    if (static_cast<std::size_t>(a.shape(1)) != tokens_per_frame) {
      throw lvc::Error(lvc::ErrorCode::DimensionMismatch, "axis 1 must equal tokens_per_frame");
    }
    rows = a.shape(0) * a.shape(1);
    dim = a.shape(2);
  } else {
    throw lvc::Error(lvc::ErrorCode::UnsupportedShape, "features must have 2 or 3 axes");
  }
  if (tokens_per_frame == 0 || rows % tokens_per_frame != 0) {
    throw lvc::Error(lvc::ErrorCode::DimensionMismatch, "rows are not a multiple of tokens_per_frame");
  }
  return lvc::VideoFeatures(rows / tokens_per_frame, tokens_per_frame, dim,
                            std::vector<float>(a.data(), a.data() + a.size()));
}

lvc::QueryEmbedding to_query(const FloatArray& a) {
  if (a.ndim() == 1) return lvc::QueryEmbedding(1, a.shape(0), std::vector<float>(a.data(), a.data() + a.size()));
  if (a.ndim() == 2) {
    return lvc::QueryEmbedding(a.shape(0), a.shape(1), std::vector<float>(a.data(), a.data() + a.size()));
  }
  throw lvc::Error(lvc::ErrorCode::UnsupportedShape, "query must have 1 or 2 axes");
}

FloatArray to_array(lvc::PseudoFrames&& out) {
  auto* holder = new std::vector<float>(std::move(out.data));
  py::capsule owner(holder, [](void* p) { delete static_cast<std::vector<float>*>(p); });
  return FloatArray({out.rows(), out.dim}, holder->data(), owner);
}

FloatArray bound_compress(const FloatArray& features, std::optional<FloatArray> query,
                          std::size_t tokens_per_frame, std::size_t pseudo_frames, std::size_t heads,
                          const std::string& mode) {
  const lvc::CompressionConfig cfg{pseudo_frames, heads, lvc::parse_mode(mode)};
  const auto v = to_features(features, tokens_per_frame);
  std::optional<lvc::QueryEmbedding> q;
  if (query) q = to_query(*query);
  lvc::PseudoFrames out;
  {
    py::gil_scoped_release release;
    out = lvc::run_compression(v, q, cfg, {lvc::threads_from_env()});
  }
  return to_array(std::move(out));
}

FloatArray bound_oracle(const FloatArray& features, const FloatArray& query, std::size_t tokens_per_frame,
                        std::size_t pseudo_frames, std::size_t heads, const std::string& mode) {
  const lvc::CompressionConfig cfg{pseudo_frames, heads, lvc::parse_mode(mode)};
  return to_array(lvc::oracle_compress(to_features(features, tokens_per_frame), to_query(query), cfg));
}

}  // namespace

PYBIND11_MODULE(_lvc, m) {
  m.doc() = "Query-attention video feature compression kernel.";
  m.attr("__version__") = std::string(lvc::kVersion);

  static py::exception<lvc::Error> error(m, "LvcError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lvc::Error& e) {
      // args = (code, message)
      py::object args = py::make_tuple(std::string(e.name()), std::string(e.what()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.def("compress", &bound_compress, py::arg("features").noconvert(), py::arg("query").noconvert() = py::none(),
        py::arg("tokens_per_frame"), py::arg("pseudo_frames"), py::arg("heads") = 1,
        py::arg("mode") = "query-attn",
        "Compress (rows, dim) or (frames, tokens, dim) float32 features into pseudo frames.");
  m.def("oracle_compress", &bound_oracle, py::arg("features").noconvert(), py::arg("query").noconvert(),
        py::arg("tokens_per_frame"), py::arg("pseudo_frames"), py::arg("heads") = 1,
        py::arg("mode") = "query-attn");
  m.def("sample_frame_indices",
        [](std::size_t total, std::size_t frames) { return lvc::sample_frame_indices(total, frames).indices; },
        py::arg("total_frames"), py::arg("frames"));
}
