#include "sle/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sle/error.hpp"

namespace sle {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + p.string());
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Eigen::MatrixXd json_mat(const json& j) {
  Eigen::MatrixXd m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != m.rows())
    throw Error(ErrorKind::SchemaError, "matrix row count mismatch in model.json");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXd r = json_vec(data[static_cast<std::size_t>(i)]);
    if (r.size() != m.cols()) throw Error(ErrorKind::SchemaError, "matrix column count mismatch in model.json");
    m.row(i) = r.transpose();
  }
  return m;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << num(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : parse_csv(text)) {
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;
    std::vector<double> r;
    for (const auto& f : row.fields) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != f.size())
        throw Error(ErrorKind::ParseError, "line " + std::to_string(row.line) + ": bad number \"" + f + "\"");
      r.push_back(v);
    }
    if (!rows.empty() && r.size() != rows.front().size())
      throw Error(ErrorKind::ParseError, "line " + std::to_string(row.line) + ": ragged matrix row");
    rows.push_back(std::move(r));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void save_model(const std::string& dir, const FittedModel& model, const std::string& config_echo,
                const std::vector<std::string>& train_ids, const Eigen::VectorXd& train_scores) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);

  json j;
  j["format_version"] = kFormatVersion;
  j["method"] = std::string(method_name(model.method));
  j["dims"] = model.dims;
  j["knn"] = {{"k", model.knn.k}, {"weighted", model.knn.weighted}};
  j["numeric_mean"] = vec_json(model.numeric_mean);
  j["numeric_scale"] = vec_json(model.numeric_scale);
  j["learner"] = {{"weights", vec_json(model.params.weights)},
                  {"bias", model.params.bias},
                  {"l2", model.params.l2}};
  j["embed_scale"] = model.embed_scale;
  j["lambda"] = model.lambda;
  j["degenerate_lambda"] = model.degenerate_lambda;
  if (model.method == Method::LSI) {
    j["lsi"] = {{"vocabulary", model.vocabulary.vocabulary},
                {"idf", vec_json(model.vocabulary.idf)},
                {"tfidf", model.vocabulary.tfidf},
                {"term_basis", mat_json(model.term_basis)},
                {"mean", vec_json(model.lsi_mean)},
                {"scale", vec_json(model.lsi_scale)}};
  }
  j["train_auc"] = model.train_auc;
  j["attempts"] = model.attempts;
  j["seed"] = model.seed;
  open_out(root / "model.json") << j.dump(2) << '\n';

  if (model.method == Method::LE || model.method == Method::SLE) {
    auto emb = open_out(root / "embedding.csv");
    write_matrix_csv(emb, model.train_embedding);
    json docs = json::array();
    for (const auto& d : model.train_documents) {
      json statements = json::array();
      for (const auto& s : d.statements) statements.push_back(s.tokens);
      docs.push_back({{"id", d.id}, {"statements", statements}});
    }
    open_out(root / "train_corpus.json") << docs.dump(1) << '\n';
  }
  {
    auto trace = open_out(root / "objective_trace.csv");
    trace << "iteration,objective\n";
    for (std::size_t i = 0; i < model.objective_trace.size(); ++i)
      trace << i << ',' << num(model.objective_trace[i]) << '\n';
  }
  {
    auto scores = open_out(root / "train_scores.csv");
    scores << "id,score\n";
    for (Eigen::Index i = 0; i < train_scores.size(); ++i) {
      const auto& id = static_cast<std::size_t>(i) < train_ids.size() ? train_ids[static_cast<std::size_t>(i)]
                                                                       : std::to_string(i);
      scores << csv_escape(id) << ',' << num(train_scores(i)) << '\n';
    }
  }
  open_out(root / "config.txt") << config_echo;
}

FittedModel load_model(const std::string& dir) {
  const std::filesystem::path root(dir);
  FittedModel model;
  try {
    const json j = json::parse(slurp(root / "model.json"));
    if (j.at("format_version").get<int>() != kFormatVersion)
      throw Error(ErrorKind::SchemaError, "unsupported model format version");
    model.method = parse_method(j.at("method").get<std::string>());
    model.dims = j.at("dims").get<Eigen::Index>();
    model.knn.k = j.at("knn").at("k").get<std::size_t>();
    model.knn.weighted = j.at("knn").at("weighted").get<bool>();
    model.numeric_mean = json_vec(j.at("numeric_mean"));
    model.numeric_scale = json_vec(j.at("numeric_scale"));
    const auto& learner = j.at("learner");
    model.params.weights = json_vec(learner.at("weights"));
    model.params.bias = learner.at("bias").get<double>();
    model.params.l2 = learner.at("l2").get<double>();
    model.embed_scale = j.at("embed_scale").get<double>();
    model.lambda = j.at("lambda").get<double>();
    model.degenerate_lambda = j.at("degenerate_lambda").get<bool>();
    if (model.method == Method::LSI) {
      const auto& lsi = j.at("lsi");
      model.vocabulary.vocabulary = lsi.at("vocabulary").get<std::vector<std::string>>();
      model.vocabulary.idf = json_vec(lsi.at("idf"));
      model.vocabulary.tfidf = lsi.at("tfidf").get<bool>();
      model.term_basis = json_mat(lsi.at("term_basis"));
      model.lsi_mean = json_vec(lsi.at("mean"));
      model.lsi_scale = json_vec(lsi.at("scale"));
    }
    model.train_auc = j.at("train_auc").get<double>();
    model.attempts = j.at("attempts").get<int>();
    model.seed = j.at("seed").get<std::uint64_t>();

    if (model.method == Method::LE || model.method == Method::SLE) {
      model.train_embedding = read_matrix_csv(slurp(root / "embedding.csv"));
      const json docs = json::parse(slurp(root / "train_corpus.json"));
      for (const auto& d : docs) {
        Document doc;
        doc.id = d.at("id").get<std::string>();
        for (const auto& s : d.at("statements")) doc.statements.push_back({s.get<std::vector<std::string>>()});
        model.train_documents.push_back(std::move(doc));
      }
      if (model.train_embedding.rows() != static_cast<Eigen::Index>(model.train_documents.size()))
        throw Error(ErrorKind::SchemaError, "embedding.csv and train_corpus.json disagree in length");
    }
    const auto trace = parse_csv(slurp(root / "objective_trace.csv"));
    for (std::size_t i = 1; i < trace.size(); ++i)
      if (trace[i].fields.size() == 2) model.objective_trace.push_back(std::stod(trace[i].fields[1]));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("model.json: ") + e.what());
  }
  if (model.params.weights.size() != model.numeric_mean.size() + (model.method == Method::Numeric ? 0 : model.dims))
    throw Error(ErrorKind::SchemaError, "learner width does not match the feature layout");
  return model;
}

}  // namespace sle
