// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forge/cleaner.hpp"
#include "forge/classifier.hpp"
#include "forge/config.hpp"
#include "forge/dedup.hpp"
#include "forge/evalqa.hpp"
#include "forge/experiment.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"
#include "forge/refmodel.hpp"
#include "forge/scoring.hpp"
#include "forge/trainer.hpp"

namespace py = pybind11;

namespace {

std::vector<forge::Document> as_docs(const std::vector<std::string>& texts) {
  std::vector<forge::Document> docs;
  docs.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    forge::Document d;
    d.id = "d" + std::to_string(i);
    d.text = texts[i];
    docs.push_back(std::move(d));
  }
  return docs;
}

// Python-facing wrapper that owns both the vocabulary and the model.
class PyNGram {
 public:
  PyNGram(const std::vector<std::string>& seed_texts, std::size_t v_max, const std::vector<double>& lambdas)
      : lm_(make(seed_texts, v_max, lambdas)) {}

  std::vector<double> nll(const std::string& text) const {
    return lm_.nll(forge::encode_document(lm_.vocab(), text));
  }
  double prob(const std::string& u, const std::string& v, const std::string& w) const {
    const auto& vocab = lm_.vocab();
    auto id = [&](const std::string& t) { return t == "<s>" ? forge::Vocab::kBos : vocab.id(t); };
    return lm_.prob(id(u), id(v), id(w));
  }
  double perplexity(const std::vector<std::string>& texts) const { return forge::perplexity(lm_, as_docs(texts)); }
  std::vector<std::string> vocab() const { return lm_.vocab().tokens(); }

 private:
  static forge::NGramLM make(const std::vector<std::string>& texts, std::size_t v_max,
                             const std::vector<double>& l) {
    if (l.size() != 4) throw forge::InvalidArgument("lambdas needs four values");
    const auto docs = as_docs(texts);
    return forge::train_rm(docs, forge::build_vocab(docs, v_max), forge::Lambdas{l[0], l[1], l[2], l[3]});
  }

  forge::NGramLM lm_;
};

forge::Config config_from(const std::string& text, const std::string& out_dir) {
  auto c = forge::Config::parse(text);
  if (!out_dir.empty()) c.set("", "out_dir", out_dir);
  return c;
}

}  // namespace

PYBIND11_MODULE(_forge, m) {
  m.doc() = "Corpus curation and token-weighted pretraining toolkit";

  // Translators run in reverse registration order, so the base class goes first.
  py::register_exception<forge::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<forge::MissingInput>(m, "MissingInput", PyExc_FileNotFoundError);
  py::register_exception<forge::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<forge::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<forge::FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("set_num_threads", &forge::set_num_threads, py::arg("n"));
  m.def("tokenize", [](const std::string& text) { return forge::tokenize(text); }, py::arg("text"));
  m.def(
      "build_vocab",
      [](const std::vector<std::string>& texts, std::size_t v_max) {
        return forge::build_vocab(as_docs(texts), v_max).tokens();
      },
      py::arg("texts"), py::arg("v_max") = 8192);

  m.def("normalize_text", [](const std::string& t) { return forge::normalize_text(t); }, py::arg("text"));
  m.def(
      "detect_language",
      [](const std::string& t) {
        const auto g = forge::detect_language(t);
        return py::make_tuple(g.lang, g.confidence);
      },
      py::arg("text"));
  m.def("quality_score", [](const std::string& t) { return forge::quality_score(t); }, py::arg("text"));
  m.def(
      "mask_pii",
      [](const std::string& t) {
        auto r = forge::mask_pii(t);
        return py::make_tuple(r.text, r.counts);
      },
      py::arg("text"));
  m.def("route", &forge::route, py::arg("p"), py::arg("t_drop") = 0.3, py::arg("t_full") = 0.8);

  m.def(
      "exact_jaccard",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b, std::size_t k) {
        return forge::exact_jaccard(a, b, k);
      },
      py::arg("a"), py::arg("b"), py::arg("k") = 5);
  m.def(
      "minhash_jaccard",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b, std::size_t k, std::size_t h,
         std::uint64_t seed) {
        const forge::MinHashParams p{h, k, seed};
        return forge::estimate_jaccard(forge::minhash(forge::shingle(a, k), p),
                                       forge::minhash(forge::shingle(b, k), p));
      },
      py::arg("a"), py::arg("b"), py::arg("k") = 5, py::arg("num_hashes") = 128, py::arg("seed") = 0x6d696e68);

  py::class_<PyNGram>(m, "NGramLM")
      .def(py::init<const std::vector<std::string>&, std::size_t, const std::vector<double>&>(),
           py::arg("seed_texts"), py::arg("v_max") = 8192,
           py::arg("lambdas") = std::vector<double>{0.5, 0.3, 0.15, 0.05})
      .def("nll", &PyNGram::nll, py::arg("text"))
      .def("prob", &PyNGram::prob, py::arg("u"), py::arg("v"), py::arg("w"))
      .def("perplexity", &PyNGram::perplexity, py::arg("texts"))
      .def_property_readonly("vocab", &PyNGram::vocab);

  m.def(
      "mucpt_weights",
      [](const std::vector<double>& ce_rm, double alpha, double eps) {
        return forge::mucpt_weights(ce_rm, alpha, eps);
      },
      py::arg("ce_rm"), py::arg("alpha") = 1.0, py::arg("eps") = 0.05);
  m.def(
      "rho1_select",
      [](const std::vector<double>& ce_model, const std::vector<double>& ce_rm, double rho) {
        return forge::rho1_select(ce_model, ce_rm, rho);
      },
      py::arg("ce_model"), py::arg("ce_rm"), py::arg("rho") = 0.6);

  m.def(
      "lr_at",
      [](std::size_t step, std::size_t steps, double lr_max, double lr_min, double warmup_frac) {
        forge::TrainConfig c;
        c.steps = steps;
        c.lr_max = lr_max;
        c.lr_min = lr_min;
        c.warmup_frac = warmup_frac;
        return forge::lr_at(c, step);
      },
      py::arg("step"), py::arg("steps"), py::arg("lr_max") = 6e-5, py::arg("lr_min") = 3e-5,
      py::arg("warmup_frac") = 0.0005);

  m.def("normalize_answer", [](const std::string& t) { return forge::normalize_answer(t); }, py::arg("text"));
  m.def(
      "agreement", [](const std::string& p, const std::string& g) { return forge::agreement(p, g); },
      py::arg("prediction"), py::arg("gold"));

  m.def(
      "run_stage",
      [](const std::string& stage, const std::string& config_text, const std::string& out_dir) {
        const auto c = config_from(config_text, out_dir);
        using Fn = nlohmann::json (*)(const forge::Config&);
        static const std::map<std::string, Fn> stages{
            {"synth", forge::stages::synth},       {"classify_train", forge::stages::classify_train},
            {"classify_score", forge::stages::classify_score}, {"clean", forge::stages::clean},
            {"dedup", forge::stages::dedup},       {"mine", forge::stages::mine},
            {"rm_train", forge::stages::rm_train}, {"rm_score", forge::stages::rm_score},
            {"score", forge::stages::score},       {"train", forge::stages::train},
            {"eval", forge::stages::eval}};
        auto it = stages.find(stage);
        if (it == stages.end()) throw forge::ConfigError("unknown stage: " + stage);
        py::gil_scoped_release release;
        return it->second(c).dump();
      },
      py::arg("stage"), py::arg("config_text") = "", py::arg("out_dir") = "",
      "Runs one pipeline stage; returns the stage report as JSON text.");
  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& out_dir) {
        const auto c = config_from(config_text, out_dir);
        py::gil_scoped_release release;
        const auto r = forge::run_experiment(c);
        return forge::comparison_csv(r);
      },
      py::arg("config_text") = "", py::arg("out_dir") = "",
      "Runs the experiment matrix; returns the comparison CSV text.");
}
