#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "osmlelm/osmlelm.hpp"

namespace py = pybind11;
using namespace osmlelm;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& a) {
    if (a.ndim() == 1) {
        return Matrix(1, static_cast<std::size_t>(a.shape(0)),
                      std::vector<double>(a.data(), a.data() + a.size()));
    }
    if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
    return Matrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                  std::vector<double>(a.data(), a.data() + a.size()));
}

DoubleArray to_array(const Matrix& m) {
    DoubleArray out({m.rows(), m.cols()});
    if (m.size() > 0) std::memcpy(out.mutable_data(), m.values().data(), m.size() * sizeof(double));
    return out;
}

LabelMatrix to_labels(const py::array& raw) {
    // Anything other than exact 0/1 is rejected by LabelMatrix.
    const auto a = DoubleArray::ensure(raw);
    if (!a || a.ndim() != 2) throw DimensionError("expected a 2-D 0/1 label array");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(a.size()));
    for (py::ssize_t i = 0; i < a.size(); ++i) {
        const double v = a.data()[i];
        if (v != 0.0 && v != 1.0) throw DataError("label entries must be 0 or 1");
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
    }
    return LabelMatrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                       std::move(bits));
}

ByteArray to_array(const LabelMatrix& y) {
    ByteArray out({y.rows(), y.labels()});
    if (!y.values().empty()) std::memcpy(out.mutable_data(), y.values().data(), y.values().size());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Online sequential multi-label extreme learning machine (C++ core)";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
    py::register_exception<DataError>(m, "DataError", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

    // numerics
    m.def("matmul", [](const DoubleArray& a, const DoubleArray& b) {
        return to_array(matmul(to_matrix(a), to_matrix(b)));
    });
    m.def("transpose", [](const DoubleArray& a) { return to_array(transpose(to_matrix(a))); });
    m.def("solve_spd", [](const DoubleArray& a, const DoubleArray& b) {
        return to_array(solve_spd(to_matrix(a), to_matrix(b)));
    });
    m.def("pinv_normal", [](const DoubleArray& h, double ridge) {
        return to_array(pinv_normal(to_matrix(h), ridge));
    }, py::arg("h"), py::arg("ridge") = 0.0, "(HᵀH + ridge·I)⁻¹Hᵀ");

    // model
    py::enum_<Activation>(m, "Activation")
        .value("sigmoid", Activation::sigmoid)
        .value("sine", Activation::sine)
        .value("hardlim", Activation::hardlim);

    py::class_<HiddenLayer>(m, "HiddenLayer")
        .def_property_readonly("input_dim", &HiddenLayer::input_dim)
        .def_property_readonly("hidden_count", &HiddenLayer::hidden_count)
        .def_property_readonly("activation", &HiddenLayer::activation)
        .def_property_readonly("weights", [](const HiddenLayer& l) { return to_array(l.weights()); })
        .def_property_readonly("biases", [](const HiddenLayer& l) { return l.biases(); })
        .def(py::self == py::self);

    m.def("init_hidden", &init_hidden, py::arg("input_dim"), py::arg("hidden_count"),
          py::arg("activation") = Activation::sigmoid, py::arg("seed") = 1);
    m.def("hidden_output", [](const HiddenLayer& layer, const DoubleArray& x) {
        return to_array(hidden_output(layer, to_matrix(x)));
    });

    py::class_<OselmModel>(m, "OselmModel")
        .def_property_readonly("hidden", [](const OselmModel& o) { return o.hidden; })
        .def_property_readonly("m", [](const OselmModel& o) { return to_array(o.m); })
        .def_property_readonly("beta", [](const OselmModel& o) { return to_array(o.beta); })
        .def_readwrite("threshold", &OselmModel::threshold)
        .def_readonly("ridge", &OselmModel::ridge)
        .def_readonly("samples_seen", &OselmModel::samples_seen)
        .def_readonly("blocks_seen", &OselmModel::blocks_seen)
        .def_property_readonly("label_count", &OselmModel::label_count)
        .def("copy", [](const OselmModel& o) { return o; });

    m.def("init_phase", [](const HiddenLayer& layer, const DoubleArray& x0, const DoubleArray& y0,
                           double ridge) { return init_phase(layer, to_matrix(x0), to_matrix(y0), ridge); },
          py::arg("layer"), py::arg("x0"), py::arg("y0"), py::arg("ridge") = 0.0,
          "Batch initialization on bipolar targets.");
    m.def("update", [](OselmModel& model, const DoubleArray& x, const DoubleArray& y) {
        update(model, to_matrix(x), to_matrix(y));
    }, "Recursive least-squares update in place; a 1-D x is a single sample.");
    m.def("predict_raw", [](const OselmModel& model, const DoubleArray& x) {
        return to_array(predict_raw(model, to_matrix(x)));
    });

    // labels
    m.def("to_bipolar", [](const py::array& y) { return to_array(to_bipolar(to_labels(y))); });
    m.def("decode", [](const DoubleArray& raw, double t) { return to_array(decode(to_matrix(raw), t)); });
    py::class_<ThresholdCalibration>(m, "ThresholdCalibration")
        .def_readonly("threshold", &ThresholdCalibration::threshold)
        .def_readonly("training_hamming", &ThresholdCalibration::training_hamming)
        .def_readonly("candidates_evaluated", &ThresholdCalibration::candidates_evaluated);
    m.def("calibrate_threshold", [](const DoubleArray& raw, const py::array& truth) {
        return calibrate_threshold(to_matrix(raw), to_labels(truth));
    });

    // metrics
    m.def("hamming_loss", [](const py::array& p, const py::array& t) {
        return hamming_loss(to_labels(p), to_labels(t));
    });
    m.def("example_accuracy", [](const py::array& p, const py::array& t) {
        return example_accuracy(to_labels(p), to_labels(t));
    });
    m.def("example_prf", [](const py::array& p, const py::array& t) {
        const auto r = example_prf(to_labels(p), to_labels(t));
        return py::make_tuple(r.precision, r.recall, r.f1);
    });
    m.def("label_cardinality", [](const py::array& y) { return label_cardinality(to_labels(y)); });
    m.def("label_density", [](const py::array& y) { return label_density(to_labels(y)); });

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("hamming_loss", &MetricsReport::hamming_loss)
        .def_readonly("accuracy", &MetricsReport::accuracy)
        .def_readonly("precision", &MetricsReport::precision)
        .def_readonly("recall", &MetricsReport::recall)
        .def_readonly("f1", &MetricsReport::f1)
        .def_readonly("empty_prediction_rate", &MetricsReport::empty_prediction_rate)
        .def_readonly("train_time", &MetricsReport::train_time)
        .def_readonly("test_time", &MetricsReport::test_time)
        .def("to_key_value", [](const MetricsReport& r) { return to_key_value(r); });
    m.def("evaluate", [](const py::array& p, const py::array& t) {
        return evaluate(to_labels(p), to_labels(t));
    });

    // data
    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def_property_readonly("features", [](const LabeledDataset& d) { return to_array(d.features); })
        .def_property_readonly("labels", [](const LabeledDataset& d) { return to_array(d.labels); })
        .def_readonly("feature_names", &LabeledDataset::feature_names)
        .def_readonly("label_names", &LabeledDataset::label_names)
        .def("__len__", &LabeledDataset::rows);
    m.def("load_csv", &load_csv, py::arg("path"), py::arg("label_count"), py::arg("has_header") = false);
    m.def("load_sparse", &load_sparse, py::arg("path"), py::arg("feature_count"), py::arg("label_count"));

    py::class_<Normalizer>(m, "Normalizer")
        .def_readonly("lo", &Normalizer::lo)
        .def_readonly("hi", &Normalizer::hi);
    m.def("fit_normalizer", [](const DoubleArray& x) {
        const Matrix features = to_matrix(x);
        return fit_normalizer(features, 0, features.rows());
    });
    m.def("apply_normalizer", [](const Normalizer& n, const DoubleArray& x) {
        return to_array(apply_normalizer(n, to_matrix(x)));
    });

    py::class_<Fold>(m, "Fold")
        .def_readonly("train", &Fold::train)
        .def_readonly("test", &Fold::test);
    m.def("kfold", py::overload_cast<std::size_t, std::size_t, std::uint64_t>(&kfold),
          py::arg("n"), py::arg("k"), py::arg("seed"));

    py::class_<ModelFile>(m, "ModelFile")
        .def(py::init([](const OselmModel& model) { return ModelFile{model, std::nullopt}; }))
        .def_property_readonly("model", [](const ModelFile& f) { return f.model; })
        .def_readonly("normalizer", &ModelFile::normalizer);
    m.def("save_model", &save_model);
    m.def("load_model", &load_model);
}
