#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adaptta/engine.hpp"
#include "adaptta/errors.hpp"
#include "adaptta/harness.hpp"
#include "adaptta/image.hpp"
#include "adaptta/report.hpp"
#include "adaptta/toy_classifier.hpp"
#include "adaptta/trace.hpp"

namespace py = pybind11;
using namespace adaptta;

namespace {

std::vector<std::uint8_t> as_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::bytes to_bytes(std::span<const std::uint8_t> data) {
  return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

LatencySource latency_arg(const py::object& obj) {
  if (obj.is_none()) return WallClock{};
  return obj.cast<LatencyModel>();
}

py::object report_dict(const BenchmarkReport& r) {
  return py::module_::import("json").attr("loads")(to_json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_adaptta, m) {
  m.doc() = "Confidence-gated test-time augmentation";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", error.ptr());
  py::register_exception<ProbabilityError>(m, "ProbabilityError", error.ptr());
  py::register_exception<PpmError>(m, "PpmError", error.ptr());
  py::register_exception<TraceError>(m, "TraceError", error.ptr());
  py::register_exception<ViewError>(m, "ViewError", error.ptr());

  py::class_<Image>(m, "Image")
      .def(py::init([](int w, int h, const py::bytes& data) { return Image(w, h, as_bytes(data)); }),
           py::arg("width"), py::arg("height"), py::arg("data"))
      .def_static("filled", &Image::filled, py::arg("width"), py::arg("height"), py::arg("r"), py::arg("g"),
                  py::arg("b"))
      .def_property_readonly("width", &Image::width)
      .def_property_readonly("height", &Image::height)
      .def_property_readonly("data", [](const Image& img) { return to_bytes(img.data()); })
      .def("at", &Image::at)
      .def(py::self == py::self);

  m.def("decode_ppm", [](const py::bytes& b) { return decode_ppm(as_bytes(b)); });
  m.def("encode_ppm", [](const Image& img) { return to_bytes(encode_ppm(img)); });
  m.def("read_ppm", &read_ppm);
  m.def("write_ppm", &write_ppm);

  py::class_<ViewSpec>(m, "ViewSpec")
      .def(py::init<int, int, int, int, bool>(), py::arg("crop_x"), py::arg("crop_y"), py::arg("crop_w"),
           py::arg("crop_h"), py::arg("hflip") = false)
      .def_readonly("crop_x", &ViewSpec::crop_x)
      .def_readonly("crop_y", &ViewSpec::crop_y)
      .def_readonly("crop_w", &ViewSpec::crop_w)
      .def_readonly("crop_h", &ViewSpec::crop_h)
      .def_readonly("hflip", &ViewSpec::hflip)
      .def(py::self == py::self);

  m.def("resize", &resize);
  m.def("prepare_source", &prepare_source);
  m.def("crop", &crop);
  m.def("hflip", &hflip);

  py::class_<TransformPolicy>(m, "TransformPolicy")
      .def_property_readonly("name", &TransformPolicy::name)
      .def_property_readonly("views", &TransformPolicy::views)
      .def_property_readonly("source_side", &TransformPolicy::source_side)
      .def_property_readonly("view_side", &TransformPolicy::view_side)
      .def("__len__", &TransformPolicy::size);
  m.def("make_policy", py::overload_cast<std::string_view>(&make_policy));

  py::class_<ProbVector>(m, "ProbVector")
      .def(py::init<std::vector<double>>())
      .def("values", &ProbVector::vector)
      .def("__len__", &ProbVector::size)
      .def("__getitem__", [](const ProbVector& p, std::size_t i) {
        if (i >= p.size()) throw py::index_error();
        return p[i];
      });
  m.def("softmax", [](const std::vector<double>& z) { return softmax(z); });
  m.def("confidence_score", [](const std::vector<double>& p) { return confidence_score(p); });
  m.def("decide_label", [](const std::vector<double>& p) { return decide_label(p); });

  py::class_<Backend>(m, "Backend")
      .def_property_readonly("num_classes", &Backend::num_classes)
      .def("predict", [](const Backend& b, const Image& img) { return predict(b, img); });

  py::class_<ToyClassifier, Backend>(m, "ToyClassifier")
      .def(py::init<std::uint64_t, std::size_t, int>(), py::arg("seed"), py::arg("num_classes"),
           py::arg("view_side") = TransformPolicy::kDefaultViewSide)
      .def("logits", &ToyClassifier::logits);

  py::class_<TraceBackend, Backend>(m, "TraceBackend")
      .def_property_readonly("policy", [](const TraceBackend& t) { return t.header().policy; })
      .def_property_readonly("num_views", &TraceBackend::num_views)
      .def_property_readonly("sample_ids", [](const TraceBackend& t) {
        std::vector<std::string> ids;
        for (const auto& s : t.samples()) ids.push_back(s.id);
        return ids;
      })
      .def("row", [](const TraceBackend& t, const std::string& id, std::size_t v) { return t.row(id, v).vector(); });
  m.def("load_trace", &load_trace);

  py::class_<LatencyModel>(m, "LatencyModel")
      .def(py::init<double, double, double>(), py::arg("per_inference_ms"),
           py::arg("per_crop_ms") = LatencyModel::kDefaultCropMs, py::arg("per_flip_ms") = LatencyModel::kDefaultFlipMs)
      .def(py::init<double, double, double, std::map<std::size_t, double>>(), py::arg("per_inference_ms"),
           py::arg("per_crop_ms"), py::arg("per_flip_ms"), py::arg("batch_curve"))
      .def_static("mobilenet_v1", &LatencyModel::mobilenet_v1)
      .def_static("mobilenet_v2", &LatencyModel::mobilenet_v2)
      .def("batch_ms", &LatencyModel::batch_ms)
      .def("without_transform_costs", &LatencyModel::without_transform_costs)
      .def_property_readonly("per_inference_ms", &LatencyModel::per_inference_ms);

  py::enum_<ExecutionMode>(m, "ExecutionMode")
      .value("SEQUENTIAL", ExecutionMode::kSequential)
      .value("BATCH", ExecutionMode::kBatch)
      .value("ADAPTIVE", ExecutionMode::kAdaptive);

  py::class_<AdapttaConfig>(m, "AdapttaConfig")
      .def(py::init([](double tau, const std::string& policy, ExecutionMode mode) {
             return AdapttaConfig(tau, make_policy(policy), mode);
           }),
           py::arg("tau"), py::arg("policy") = "5C", py::arg("mode") = ExecutionMode::kAdaptive)
      .def_readonly("tau", &AdapttaConfig::tau)
      .def_readonly("mode", &AdapttaConfig::mode)
      .def_property_readonly("policy", [](const AdapttaConfig& c) { return c.policy.name(); });

  py::class_<PredictionOutcome>(m, "PredictionOutcome")
      .def_readonly("label", &PredictionOutcome::label)
      .def_readonly("confidence", &PredictionOutcome::confidence)
      .def_readonly("inferences_used", &PredictionOutcome::inferences_used)
      .def_readonly("avg_probs", &PredictionOutcome::avg_probs);

  // Samples are either an image (pixel backends) or a trace sample id.
  m.def("run", [](const Backend& b, const Image& img, const AdapttaConfig& cfg) { return run(b, Sample{"", img}, cfg); });
  m.def("run", [](const Backend& b, const std::string& id, const AdapttaConfig& cfg) {
    return run(b, Sample{id, std::nullopt}, cfg);
  });

  m.def(
      "evaluate",
      [](const Backend& b, const AdapttaConfig& cfg, const py::object& latency, const std::string& manifest) {
        const auto* trace = dynamic_cast<const TraceBackend*>(&b);
        if (manifest.empty() && trace == nullptr) throw ConfigError("a pixel backend needs a manifest");
        const DatasetManifest entries =
            manifest.empty() ? manifest_from_trace(*trace) : read_manifest(manifest, b.num_classes());
        return report_dict(evaluate(b, entries, cfg, latency_arg(latency)));
      },
      py::arg("backend"), py::arg("config"), py::arg("latency") = py::none(), py::arg("manifest") = "");
  m.def(
      "sweep_tau",
      [](const TraceBackend& t, const std::vector<double>& taus, const py::object& latency) {
        const AdapttaConfig cfg(0.0, make_policy(t.header().policy), ExecutionMode::kAdaptive);
        py::list out;
        for (const auto& r : sweep_tau(t, load_dataset(manifest_from_trace(t), t), cfg, taus, latency_arg(latency))) {
          out.append(report_dict(r));
        }
        return out;
      },
      py::arg("trace"), py::arg("taus"), py::arg("latency") = py::none());
  m.def(
      "compare_modes",
      [](const TraceBackend& t, double tau, const py::object& latency) {
        const auto cmp = compare_modes(t, load_dataset(manifest_from_trace(t), t), make_policy(t.header().policy),
                                       tau, latency_arg(latency));
        py::dict out;
        out["batch"] = report_dict(cmp.batch);
        out["sequential"] = report_dict(cmp.sequential);
        out["adaptive"] = report_dict(cmp.adaptive);
        return out;
      },
      py::arg("trace"), py::arg("tau") = 0.8, py::arg("latency") = py::none());
}
