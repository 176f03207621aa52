#include "ars/model_io.hpp"

namespace ars {

namespace {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const Json& rows, const char* key) {
  if (!rows.is_array()) throw InvalidArgument(std::string("model field '") + key + "' must be an array of rows");
  const auto n = static_cast<Index>(rows.size());
  const Index m = n == 0 ? 0 : static_cast<Index>(rows.front().size());
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m)
      throw InvalidArgument(std::string("model field '") + key + "' has ragged rows");
    for (Index j = 0; j < m; ++j) out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return out;
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw InvalidArgument(std::string("model JSON lacks '") + key + "'");
  return doc.at(key);
}

CompletedSeries align(const Json& doc, const ObservedSeries& history) {
  const auto r = field(doc, "r").get<Index>();
  if (history.dim() != r)
    throw InvalidArgument("history has " + std::to_string(history.dim()) + " columns, model expects r = " +
                          std::to_string(r));
  const Matrix slack = matrix_from(field(doc, "slack"), "slack");
  const auto s = field(doc, "s_tilde").get<Index>();
  if (slack.cols() != s && slack.rows() > 0) throw InvalidArgument("slack width does not match s_tilde");
  const Index m = std::min(history.length(), slack.rows());
  if (m < 1) throw InvalidArgument("history and stored slack must be non-empty");
  return CompletedSeries(history.slice(history.length() - m, m), slack.bottomRows(m));
}

}  // namespace

Json to_json(const ArModel& model) {
  Matrix stacked(model.dim, model.dim * model.order);
  for (int k = 0; k < model.order; ++k) stacked.middleCols(k * model.dim, model.dim) = model.coeffs[k];
  Json doc = {{"type", "ar"},
              {"p", model.order},
              {"r", model.dim},
              {"h", model.step},
              {"coeffs", matrix_json(stacked)},
              {"final_loss", model.residual_sum},
              {"converged", true}};
  if (model.intercept.size() > 0) doc["intercept"] = std::vector<double>(model.intercept.begin(), model.intercept.end());
  return doc;
}

Json to_json(const ArsModel& model) {
  return {{"type", "ars"},
          {"r", model.r()},
          {"s_tilde", model.s_tilde()},
          {"h", model.step()},
          {"B", matrix_json(model.B)},
          {"slack", matrix_json(model.completed.slack)},
          {"final_loss", model.final_loss},
          {"initial_loss", model.initial_loss},
          {"ridge", model.ridge},
          {"seed", model.seed},
          {"iterations", model.optim.iterations},
          {"converged", model.optim.converged}};
}

Json to_json(const ExtArsModel& model) {
  return {{"type", "ars_int"},
          {"r", model.r()},
          {"s_tilde", model.s_tilde()},
          {"h", model.step()},
          {"E", matrix_json(model.E)},
          {"slack", matrix_json(model.completed.slack)},
          {"final_loss", model.final_loss},
          {"initial_loss", model.initial_loss},
          {"ridge", model.ridge},
          {"seed", model.seed},
          {"underdetermined", model.underdetermined},
          {"iterations", model.optim.iterations},
          {"converged", model.optim.converged}};
}

ArModel ar_from_json(const Json& doc) {
  if (field(doc, "type") != "ar") throw InvalidArgument("model type is not 'ar'");
  ArModel model;
  model.order = field(doc, "p").get<int>();
  model.dim = field(doc, "r").get<Index>();
  model.step = field(doc, "h").get<double>();
  if (model.order < 1 || model.dim < 1) throw InvalidArgument("AR model needs p >= 1 and r >= 1");
  const Matrix stacked = matrix_from(field(doc, "coeffs"), "coeffs");
  if (stacked.rows() != model.dim || stacked.cols() != model.dim * model.order)
    throw InvalidArgument("AR coefficient block has the wrong shape");
  for (int k = 0; k < model.order; ++k) model.coeffs.push_back(stacked.middleCols(k * model.dim, model.dim));
  if (doc.contains("intercept")) {
    const auto values = doc.at("intercept").get<std::vector<double>>();
    model.intercept = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  }
  model.residual_sum = doc.value("final_loss", 0.0);
  return model;
}

ArsModel ars_from_json(const Json& doc, const ObservedSeries& history) {
  if (field(doc, "type") != "ars") throw InvalidArgument("model type is not 'ars'");
  ArsModel model;
  model.completed = align(doc, history);
  model.B = matrix_from(field(doc, "B"), "B");
  if (model.B.rows() != model.completed.dim() || model.B.cols() != model.completed.dim())
    throw InvalidArgument("B has the wrong shape for r + s_tilde");
  model.final_loss = doc.value("final_loss", 0.0);
  model.ridge = doc.value("ridge", 0.0);
  model.seed = doc.value("seed", std::uint64_t{0});
  return model;
}

ExtArsModel ars_int_from_json(const Json& doc, const ObservedSeries& history) {
  if (field(doc, "type") != "ars_int") throw InvalidArgument("model type is not 'ars_int'");
  ExtArsModel model;
  model.completed = align(doc, history);
  model.E = matrix_from(field(doc, "E"), "E");
  const Index d = model.completed.dim();
  if (model.E.rows() != d || model.E.cols() != interaction_dim(d))
    throw InvalidArgument("E has the wrong shape for r + s_tilde");
  model.final_loss = doc.value("final_loss", 0.0);
  model.ridge = doc.value("ridge", 0.0);
  model.seed = doc.value("seed", std::uint64_t{0});
  return model;
}

ObservedSeries forecast_from_json(const Json& doc, const ObservedSeries& history, Index k) {
  const std::string type = field(doc, "type").get<std::string>();
  if (type == "ar") {
    const ArModel model = ar_from_json(doc);
    if (history.dim() != model.dim) throw InvalidArgument("history dimension does not match the AR model");
    return forecast_ar(model, history, k);
  }
  if (type == "ars") return forecast_ars(ars_from_json(doc, history), k);
  if (type == "ars_int") return forecast_ars_interactions(ars_int_from_json(doc, history), k);
  throw InvalidArgument("unknown model type '" + type + "'");
}

}  // namespace ars
