#ifndef SLE_MODEL_IO_HPP
#define SLE_MODEL_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sle/model.hpp"

namespace sle {

/// Writes a model directory:
///   model.json           method, learner, standardizers, LSI basis, diagnostics
///   embedding.csv        training embedding (LE/SLE), one row per training document
///   train_corpus.json    normalized training documents (LE/SLE)
///   objective_trace.csv  SLE joint objective per outer iteration
///   train_scores.csv     id,score for the training rows
///   config.txt           resolved configuration
/// Creates `dir` if needed. Throws IoError.
void save_model(const std::string& dir, const FittedModel& model, const std::string& config_echo,
                const std::vector<std::string>& train_ids, const Eigen::VectorXd& train_scores);

/// Reads what save_model wrote. Throws IoError or SchemaError.
FittedModel load_model(const std::string& dir);

/// Matrix as CSV with 17 significant digits (exact round trip), no header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::string_view text);

}  // namespace sle

#endif  // SLE_MODEL_IO_HPP
