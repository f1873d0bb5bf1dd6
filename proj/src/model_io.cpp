#include "pdtk/model_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "pdtk/errors.hpp"

namespace pdtk {

namespace {

using nlohmann::json;

std::vector<double> number_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorCode::InvalidArgument, where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(ErrorCode::InvalidArgument, where + " must hold only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> string_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorCode::InvalidArgument, where + " must be an array of strings");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) fail(ErrorCode::InvalidArgument, where + " must hold only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

DegradationModel explicit_model(const json& j) {
  const auto labels = string_array(j.at("x_labels"), "x_labels");
  Alphabet x = Alphabet::with_labels(labels);
  if (j.contains("x_values")) {
    const json& xv = j.at("x_values");
    if (!xv.is_array() || xv.size() != labels.size())
      fail(ErrorCode::InvalidArgument, "x_values must align with x_labels");
    std::vector<std::vector<double>> values;
    values.reserve(xv.size());
    for (const auto& v : xv) {
      if (v.is_number())
        values.push_back({v.get<double>()});
      else
        values.push_back(number_array(v, "x_values entry"));
    }
    x.values = std::move(values);
    validate_alphabet(x);
  }

  const json& ch = j.at("channel");
  if (!ch.is_array() || ch.size() != labels.size())
    fail(ErrorCode::InvalidArgument, "channel must hold one row per source symbol");
  std::vector<std::vector<double>> rows;
  rows.reserve(ch.size());
  for (const auto& row : ch) rows.push_back(number_array(row, "channel row"));
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& row : rows)
    if (row.size() != cols) fail(ErrorCode::InvalidArgument, "channel rows differ in length");

  Alphabet y;
  if (j.contains("y_labels")) {
    y = Alphabet::with_labels(string_array(j.at("y_labels"), "y_labels"));
    if (y.size() != cols)
      fail(ErrorCode::InvalidArgument, "y_labels must match the channel row length");
  } else {
    std::vector<std::string> ylabels;
    for (std::size_t k = 0; k < cols; ++k) ylabels.push_back("y" + std::to_string(k));
    y = Alphabet::with_labels(ylabels);
  }

  Table t(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) t.at(r, c) = rows[r][c];

  DiscreteDistribution prior =
      DiscreteDistribution::checked(x, number_array(j.at("prior"), "prior"));
  ConditionalKernel channel = ConditionalKernel::checked(std::move(x), std::move(y), std::move(t));
  return DegradationModel::checked(std::move(prior), std::move(channel));
}

DegradationModel gaussian_model(const json& j) {
  const std::vector<double> x_values = number_array(j.at("x_values"), "x_values");
  if (!j.at("sigma").is_number()) fail(ErrorCode::InvalidArgument, "sigma must be a number");
  const double sigma = j.at("sigma").get<double>();
  const json& g = j.at("grid");
  if (!g.is_object() || !g.contains("lo") || !g.contains("hi") || !g.contains("n_bins"))
    fail(ErrorCode::InvalidArgument, "grid must hold lo, hi and n_bins");
  GridSpec grid;
  grid.lo = g.at("lo").get<double>();
  grid.hi = g.at("hi").get<double>();
  grid.n_bins = g.at("n_bins").get<std::size_t>();

  std::vector<double> prior;
  if (j.contains("prior")) {
    prior = number_array(j.at("prior"), "prior");
  } else {
    if (x_values.empty()) fail(ErrorCode::InvalidArgument, "x_values is empty");
    prior.assign(x_values.size(), 1.0 / static_cast<double>(x_values.size()));
  }
  return make_gaussian_model(prior, x_values, sigma, grid);
}

}  // namespace

DegradationModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.empty()) fail(ErrorCode::InvalidArgument, "model file is empty: " + path);

  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, "model file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "model file " + path + " must be an object");

  try {
    const bool has_channel = j.contains("channel");
    const bool has_gaussian = j.contains("sigma") || j.contains("grid");
    if (has_channel && !has_gaussian) return explicit_model(j);
    if (has_gaussian && !has_channel) return gaussian_model(j);
    fail(ErrorCode::InvalidArgument,
         "model file " + path + " must hold either a channel or sigma with a grid");
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, "model file " + path + ": " + e.what());
  }
}

}  // namespace pdtk
