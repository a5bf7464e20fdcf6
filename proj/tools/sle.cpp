// Command-line front end: similarity, embed, train, predict, evaluate,
// compare, synth.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sle/config.hpp"
#include "sle/cross_validation.hpp"
#include "sle/dataset.hpp"
#include "sle/error.hpp"
#include "sle/lsi.hpp"
#include "sle/model_io.hpp"
#include "sle/spectral.hpp"
#include "sle/synthetic.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNumerical = 3;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string dict_dir;
  bool strict = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key = value configuration file");
  cmd->add_option("--set", c.overrides, "override one key, e.g. --set knn.k=7");
  cmd->add_option("--dict-dir", c.dict_dir, "directory with synonyms.txt, acronyms.txt, abbreviations.txt");
  cmd->add_flag("--strict", c.strict, "abort on the first malformed row");
}

sle::PipelineConfig resolve(const Common& c) {
  sle::PipelineConfig cfg = c.config_path.empty() ? sle::PipelineConfig{} : sle::PipelineConfig::load(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sle::Error(sle::ErrorKind::InvalidConfig, "--set expects key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  if (!c.dict_dir.empty()) cfg.dict_dir = c.dict_dir;
  return cfg;
}

sle::Dataset load_dataset(const std::string& path, const sle::PipelineConfig& cfg, bool strict,
                          bool require_label) {
  sle::IngestOptions opts;
  opts.strict = strict;
  opts.require_label = require_label;
  const auto result = sle::ingest_csv(path, opts);
  for (const auto& d : result.diagnostics) std::cerr << path << ": " << d << '\n';
  if (result.records.empty()) throw sle::Error(sle::ErrorKind::SchemaError, path + ": no usable rows");
  return sle::make_dataset(result.records, cfg.resolved_normalization());
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw sle::Error(sle::ErrorKind::IoError, "cannot write " + path);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_labeled_matrix(std::ostream& out, const std::vector<std::string>& ids, const Eigen::MatrixXd& m,
                          const std::string& prefix) {
  out << "id";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << prefix << j + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << sle::csv_escape(ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << num(m(i, j));
    out << '\n';
  }
}

// "5", "1..50", "5,10,20" or a mix such as "1..5,10"
std::vector<Eigen::Index> parse_dims(const std::string& spec) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      const auto dots = part.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stol(part));
      } else {
        const long lo = std::stol(part.substr(0, dots)), hi = std::stol(part.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("empty range");
        for (long d = lo; d <= hi; ++d) out.push_back(d);
      }
    } catch (const std::logic_error&) {
      throw sle::Error(sle::ErrorKind::InvalidConfig, "bad --dims \"" + spec + "\"");
    }
  }
  for (auto d : out)
    if (d < 1) throw sle::Error(sle::ErrorKind::InvalidConfig, "--dims values must be positive");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervised Laplacian eigenmaps for short clinical text"};
  app.require_subcommand(1);

  Common common;
  std::string input, out_path, method_arg, report_dir, model_dir, spec_path, methods_arg, dims_arg, dict_out;
  Eigen::Index dims = 0;
  int folds = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto* similarity = app.add_subcommand("similarity", "full document similarity matrix");
  add_common(similarity, common);
  similarity->add_option("--input", input, "dataset CSV")->required();
  similarity->add_option("--out", out_path, "output CSV")->required();

  auto* embed = app.add_subcommand("embed", "unsupervised embedding (le or lsi)");
  add_common(embed, common);
  embed->add_option("--input", input, "dataset CSV")->required();
  embed->add_option("--method", method_arg, "le or lsi")->required();
  embed->add_option("--dims", dims, "embedding dimension");
  embed->add_option("--out", out_path, "output CSV")->required();

  auto* train = app.add_subcommand("train", "fit a model and write a model directory");
  add_common(train, common);
  train->add_option("--input", input, "dataset CSV")->required();
  train->add_option("--method", method_arg, "numeric, le, sle or lsi");
  train->add_option("--dims", dims, "embedding dimension");
  train->add_option("--seed", seed, "training seed")->each([&](const std::string&) { seed_given = true; });
  train->add_option("--out", model_dir, "model directory")->required();

  auto* predict = app.add_subcommand("predict", "score new records with a saved model");
  add_common(predict, common);
  predict->add_option("--model", model_dir, "model directory")->required();
  predict->add_option("--input", input, "dataset CSV (label column may be empty)")->required();
  predict->add_option("--out", out_path, "output CSV")->required();

  auto* evaluate = app.add_subcommand("evaluate", "k-fold cross-validation of one method");
  add_common(evaluate, common);
  evaluate->add_option("--input", input, "dataset CSV")->required();
  evaluate->add_option("--method", method_arg, "numeric, le, sle or lsi");
  evaluate->add_option("--dims", dims, "embedding dimension");
  evaluate->add_option("--folds", folds, "number of folds");
  evaluate->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_given = true; });
  evaluate->add_option("--report", report_dir, "report directory")->required();

  auto* compare = app.add_subcommand("compare", "cross-validate several methods over several dimensions");
  add_common(compare, common);
  compare->add_option("--input", input, "dataset CSV")->required();
  compare->add_option("--methods", methods_arg, "comma-separated methods")->default_val("numeric,le,sle,lsi");
  compare->add_option("--dims", dims_arg, "e.g. 1..50 or 5,10,20")->default_val("20");
  compare->add_option("--folds", folds, "number of folds");
  compare->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_given = true; });
  compare->add_option("--report", report_dir, "report directory")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--spec", spec_path, "generator spec (key = value)");
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--out", out_path, "output CSV")->required();
  synth->add_option("--dict-out", dict_out, "also write the generator's dictionary files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (synth->parsed()) {
      const sle::SyntheticSpec spec = spec_path.empty() ? sle::SyntheticSpec{} : sle::SyntheticSpec::load(spec_path);
      const auto data = sle::generate_synthetic(spec, seed);
      auto out = open_out(out_path);
      sle::write_dataset_csv(out, data.records);
      if (!dict_out.empty()) {
        std::filesystem::create_directories(dict_out);
        const auto& files = sle::synthetic_dictionary_files();
        open_out(dict_out + "/synonyms.txt") << files.synonyms;
        open_out(dict_out + "/acronyms.txt") << files.acronyms;
        open_out(dict_out + "/abbreviations.txt") << files.abbreviations;
      }
      return 0;
    }

    if (predict->parsed()) {
      sle::PipelineConfig cfg = sle::PipelineConfig::load(model_dir + "/config.txt");
      if (!common.config_path.empty() || !common.overrides.empty() || !common.dict_dir.empty()) {
        // only matching-related settings may be adjusted at prediction time
        const sle::PipelineConfig user = resolve(common);
        cfg.dict_dir = user.dict_dir;
      }
      const sle::FittedModel model = sle::load_model(model_dir);
      const sle::Dataset data = load_dataset(input, cfg, common.strict, false);
      const auto pred = sle::predict(model, data.numeric, data.documents, cfg.match_context());
      auto out = open_out(out_path);
      out << "id,score\n";
      for (std::size_t i = 0; i < data.size(); ++i)
        out << sle::csv_escape(data.ids[i]) << ',' << num(pred.probabilities(static_cast<Eigen::Index>(i))) << '\n';
      if (pred.zero_weight_estimates)
        std::cerr << "note: " << pred.zero_weight_estimates << " record(s) had no similar training document\n";
      return 0;
    }

    sle::PipelineConfig cfg = resolve(common);
    if (!method_arg.empty() && !compare->parsed()) cfg.method.method = sle::parse_method(method_arg);
    if (dims > 0) cfg.method.dims = dims;
    if (folds > 0) cfg.cv.folds = folds;
    if (seed_given) cfg.cv.seed = seed;
    const sle::MatchContext ctx = cfg.match_context();

    if (similarity->parsed()) {
      const sle::Dataset data = load_dataset(input, cfg, common.strict, false);
      const auto s = sle::build_similarity_matrix(data.documents, ctx);
      auto out = open_out(out_path);
      std::vector<std::string> names(data.ids);
      out << "id";
      for (const auto& id : names) out << ',' << sle::csv_escape(id);
      out << '\n';
      for (Eigen::Index i = 0; i < s.values.rows(); ++i) {
        out << sle::csv_escape(names[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < s.values.cols(); ++j) out << ',' << num(s.values(i, j));
        out << '\n';
      }
      return 0;
    }

    if (embed->parsed()) {
      const sle::Dataset data = load_dataset(input, cfg, common.strict, false);
      Eigen::MatrixXd x;
      if (cfg.method.method == sle::Method::LE) {
        const auto s = sle::build_similarity_matrix(data.documents, ctx);
        x = sle::solve_eigenmap(sle::build_laplacian(s.values), cfg.method.dims);
      } else if (cfg.method.method == sle::Method::LSI) {
        const auto tdm = sle::build_tfidf(data.documents, cfg.method.tfidf);
        x = sle::lsi_embed(tdm.weights, cfg.method.dims).document_embedding;
      } else {
        throw sle::Error(sle::ErrorKind::InvalidConfig, "embed supports le and lsi");
      }
      auto out = open_out(out_path);
      write_labeled_matrix(out, data.ids, x, "x");
      return 0;
    }

    if (train->parsed()) {
      const sle::Dataset data = load_dataset(input, cfg, common.strict, true);
      const std::uint64_t train_seed = seed_given ? seed : cfg.cv.seed;
      const sle::TrainingSet ts{data.numeric, data.labels, data.documents};
      const sle::FittedModel model = sle::fit_model(ts, cfg.method, ctx, train_seed);
      // scores as predict computes them, so train -> predict round-trips
      const auto scores = sle::predict(model, data.numeric, data.documents, ctx).probabilities;
      std::string echo = cfg.echo();
      if (!cfg.dict_dir.empty())
        echo = "# dict.dir is resolved relative to the working directory at training time\n" + echo;
      sle::save_model(model_dir, model, echo, data.ids, scores);
      std::cerr << "trained " << sle::method_name(model.method) << " on " << data.size()
                << " records, training AUC " << model.train_auc << " after " << model.attempts
                << " attempt(s)\n";
      return 0;
    }

    if (evaluate->parsed()) {
      const sle::Dataset data = load_dataset(input, cfg, common.strict, true);
      const auto report = sle::cross_validate(data, cfg.method, cfg.cv, ctx);
      std::filesystem::create_directories(report_dir);
      {
        auto out = open_out(report_dir + "/report.csv");
        sle::write_report_csv(out, report);
      }
      {
        auto out = open_out(report_dir + "/predictions.csv");
        sle::write_predictions_csv(out, report);
      }
      {
        auto out = open_out(report_dir + "/report.txt");
        sle::write_report_text(out, report);
        out << "\nconfiguration\n" << cfg.echo();
      }
      open_out(report_dir + "/config.txt") << cfg.echo();
      sle::write_report_text(std::cout, report);
      return 0;
    }

    if (compare->parsed()) {
      const sle::Dataset data = load_dataset(input, cfg, common.strict, true);
      std::vector<sle::Method> methods;
      std::stringstream ms(methods_arg);
      for (std::string m; std::getline(ms, m, ',');) methods.push_back(sle::parse_method(m));
      const auto dim_list = parse_dims(dims_arg);
      bool needs_similarity = false;
      for (auto m : methods) needs_similarity |= m == sle::Method::LE || m == sle::Method::SLE;
      Eigen::MatrixXd s;
      if (needs_similarity) s = sle::build_similarity_matrix(data.documents, ctx).values;

      std::filesystem::create_directories(report_dir);
      auto out = open_out(report_dir + "/compare.csv");
      out << "method,dims,auc,mcc,sensitivity,specificity,lr_plus,lr_minus\n";
      for (auto m : methods) {
        std::optional<sle::EvalReport> numeric_report;
        for (auto d : dim_list) {
          sle::MethodConfig mc = cfg.method;
          mc.method = m;
          mc.dims = d;
          sle::EvalReport report;
          if (m == sle::Method::Numeric) {
            // dimension-independent; evaluated once and repeated per row
            if (!numeric_report) numeric_report = sle::cross_validate(data, mc, cfg.cv, ctx);
            report = *numeric_report;
          } else {
            report = sle::cross_validate(data, mc, cfg.cv, ctx, needs_similarity ? &s : nullptr);
          }
          const auto& r = report.mean;
          out << sle::method_name(m) << ',' << d << ',' << num(r.auc) << ',' << num(r.mcc) << ','
              << num(r.sensitivity) << ',' << num(r.specificity) << ',' << num(r.lr_plus) << ','
              << num(r.lr_minus) << '\n';
          out.flush();
          std::cerr << sle::method_name(m) << " dims=" << d << " auc=" << r.auc << " mcc=" << r.mcc << '\n';
        }
      }
      open_out(report_dir + "/config.txt") << cfg.echo();
      return 0;
    }
  } catch (const sle::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == sle::ErrorKind::InvalidConfig) return kUsage;
    return sle::is_numerical(e.kind()) ? kNumerical : kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: IoError: " << e.what() << '\n';
    return kData;
  }
  return 0;
}
