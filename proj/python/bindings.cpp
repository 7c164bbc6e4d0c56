#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "meboost/dataset.hpp"
#include "meboost/experiment.hpp"
#include "meboost/metrics.hpp"
#include "meboost/serialization.hpp"

namespace py = pybind11;
using namespace meboost;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

std::vector<Label> to_labels(const IntArray& y) {
  if (y.ndim() != 1) throw InvalidArgument("labels must be one-dimensional");
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(y.size()));
  for (py::ssize_t i = 0; i < y.size(); ++i) {
    const auto v = y.at(i);
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
    out.push_back(v == 1 ? Label::positive : Label::negative);
  }
  return out;
}

Dataset from_arrays(const Array& x, const IntArray& y, std::vector<std::string> names) {
  if (x.ndim() != 2) throw InvalidArgument("features must be a 2-D array");
  const auto n = static_cast<std::size_t>(x.shape(0));
  const auto p = static_cast<std::size_t>(x.shape(1));
  if (names.empty()) {
    for (std::size_t f = 0; f < p; ++f) names.push_back("x" + std::to_string(f));
  }
  std::vector<double> values(x.data(), x.data() + n * p);
  return Dataset(std::move(values), p, to_labels(y), std::move(names), "positive", "negative");
}

Array features_of(const Dataset& d) {
  Array out({d.size(), d.n_features()});
  std::copy(d.features().begin(), d.features().end(), out.mutable_data());
  return out;
}

IntArray labels_of(const Dataset& d) {
  IntArray out(static_cast<py::ssize_t>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) out.mutable_at(i) = d.label(i) == Label::positive ? 1 : 0;
  return out;
}

py::dict summary_dict(const ImbalanceSummary& s) {
  py::dict out;
  out["n_instances"] = s.n_instances;
  out["n_features"] = s.n_features;
  out["n_majority"] = s.n_majority;
  out["n_minority"] = s.n_minority;
  out["imbalance_ratio"] = s.imbalance_ratio;
  return out;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw InvalidArgument("scores must be one-dimensional");
  return {a.data(), a.data() + a.size()};
}

MethodSpec method_from_options(const std::string& method, const py::dict& options) {
  MethodSpec spec = default_method(method_kind_from_string(method));
  spec.name = method;
  for (const auto& [key_obj, value] : options) {
    const auto key = key_obj.cast<std::string>();
    if (key == "window") spec.boost.window = value.cast<std::size_t>();
    else if (key == "max_rounds") spec.boost.max_rounds = value.cast<std::size_t>();
    else if (key == "improvement_epsilon") spec.boost.improvement_epsilon = value.cast<double>();
    else if (key == "first_kind") spec.boost.first_kind = learner_kind_from_string(value.cast<std::string>());
    else if (key == "max_retries") spec.boost.max_retries = value.cast<std::size_t>();
    else if (key == "max_depth") spec.boost.tree.max_depth = value.cast<std::size_t>();
    else if (key == "min_leaf_weight") spec.boost.tree.min_leaf_weight = value.cast<double>();
    else if (key == "extra_tree_feature_count") spec.boost.tree.extra_tree_feature_count = value.cast<std::size_t>();
    else if (key == "target_ratio") spec.sampler.target_ratio = value.cast<double>();
    else if (key == "smote_k") spec.sampler.smote_k = value.cast<std::size_t>();
    else if (key == "scale_features") spec.sampler.scale_features = value.cast<bool>();
    else throw InvalidArgument("unknown option '" + key + "'");
  }
  return spec;
}

}  // namespace

PYBIND11_MODULE(_meboost, m) {
  m.doc() = "Boosting with alternating decision and extra trees for imbalanced data";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&from_arrays), py::arg("features"), py::arg("labels"),
           py::arg("feature_names") = std::vector<std::string>{},
           "Dataset from a 2-D float array and 0/1 labels (1 = minority).")
      .def("__len__", &Dataset::size)
      .def_property_readonly("n_features", &Dataset::n_features)
      .def_property_readonly("features", &features_of)
      .def_property_readonly("labels", &labels_of)
      .def_property_readonly("ids", &Dataset::ids)
      .def_property_readonly("feature_names", &Dataset::feature_names)
      .def_property_readonly("positive_class", &Dataset::positive_class_name)
      .def_property_readonly("negative_class", &Dataset::negative_class_name)
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset " + std::to_string(d.size()) + " x " + std::to_string(d.n_features()) + ", " +
               std::to_string(d.count(Label::positive)) + " positive>";
      });

  m.def("load_keel", &parse_keel_file, py::arg("path"));
  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const std::string& label_column, const std::string& positive_label) {
        return parse_csv_file(path, label_column, positive_label);
      },
      py::arg("path"), py::arg("label_column"), py::arg("positive_label"));
  m.def("summarize", [](const Dataset& d) { return summary_dict(summarize(d)); }, py::arg("dataset"));

  m.def(
      "stratified_holdout",
      [](const Dataset& d, double fraction, std::uint64_t seed) {
        Partition p = stratified_holdout(d, fraction, seed);
        return py::make_tuple(std::move(p.train), std::move(p.test));
      },
      py::arg("dataset"), py::arg("fraction"), py::arg("seed") = 0, "Returns (rest, holdout).");
  m.def(
      "stratified_kfold",
      [](const Dataset& d, std::size_t k, std::uint64_t seed) {
        py::list out;
        for (auto& p : stratified_kfold(d, k, seed)) out.append(py::make_tuple(std::move(p.train), std::move(p.test)));
        return out;
      },
      py::arg("dataset"), py::arg("k"), py::arg("seed") = 0);

  m.def(
      "auroc", [](const Array& s, const IntArray& y) { return auroc(to_vector(s), to_labels(y)); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "auroc_trapezoid",
      [](const Array& s, const IntArray& y) { return auroc_trapezoid(to_vector(s), to_labels(y)); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "roc_curve",
      [](const Array& s, const IntArray& y) {
        const RocCurve c = roc_curve(to_vector(s), to_labels(y));
        std::vector<double> fpr;
        std::vector<double> tpr;
        for (const auto& p : c.points) {
          fpr.push_back(p.fpr);
          tpr.push_back(p.tpr);
        }
        return py::make_tuple(py::array(py::cast(fpr)), py::array(py::cast(tpr)), py::array(py::cast(c.thresholds)));
      },
      py::arg("scores"), py::arg("labels"), "Returns (fpr, tpr, thresholds).");

  py::class_<EnsembleModel>(m, "Model")
      .def("__len__", &EnsembleModel::size)
      .def_property_readonly("kinds",
                             [](const EnsembleModel& e) {
                               std::vector<std::string> out;
                               for (const auto& r : e.records()) out.emplace_back(to_string(r.kind));
                               return out;
                             })
      .def_property_readonly("alphas",
                             [](const EnsembleModel& e) {
                               std::vector<double> out;
                               for (const auto& r : e.records()) out.push_back(r.alpha);
                               return out;
                             })
      .def(
          "decision_function",
          [](const EnsembleModel& e, const Dataset& d) { return py::array(py::cast(ensemble_scores(e, d))); },
          py::arg("dataset"))
      .def(
          "predict",
          [](const EnsembleModel& e, const Dataset& d) {
            IntArray out(static_cast<py::ssize_t>(d.size()));
            for (std::size_t i = 0; i < d.size(); ++i) {
              out.mutable_at(i) = ensemble_predict(e, d.row(i)) == Label::positive ? 1 : 0;
            }
            return out;
          },
          py::arg("dataset"))
      .def("to_json", [](const EnsembleModel& e) { return ensemble_to_json(e).dump(); })
      .def_static(
          "from_json", [](const std::string& text) { return ensemble_from_json(nlohmann::json::parse(text)); },
          py::arg("text"));

  m.def(
      "_train",
      [](const Dataset& train, const Dataset& holdout, const std::string& method, std::uint64_t seed,
         const py::dict& options) {
        const MethodSpec spec = method_from_options(method, options);
        MEBoostResult r;
        {
          py::gil_scoped_release release;
          r = train_method(spec, train, holdout, seed);
        }
        py::list trajectory;
        for (const auto& t : r.score_trajectory) {
          trajectory.append(py::make_tuple(t.round, std::string(to_string(t.kind)), t.auroc));
        }
        py::dict info;
        info["best_score"] = r.best_score;
        info["best_round"] = r.best_round;
        info["rounds_trained"] = r.rounds_trained;
        info["skipped_rounds"] = r.skipped_rounds;
        info["trajectory"] = trajectory;
        return py::make_tuple(std::move(r.best_model), info);
      },
      py::arg("train"), py::arg("holdout"), py::arg("method"), py::arg("seed"), py::arg("options"));

  m.def(
      "_run_experiment",
      [](const std::filesystem::path& config, std::size_t jobs) {
        const ExperimentConfig cfg = ExperimentConfig::from_file(config);
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(cfg, jobs);
        }
        return py::make_tuple(report_to_json(report).dump(), render_table(report));
      },
      py::arg("config"), py::arg("jobs"));
}
