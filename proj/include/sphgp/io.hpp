#pragma once

// Plain CSV tables with '#'-prefixed metadata lines ahead of the header, plus
// readers/writers for the library's data types. Numbers are written in the
// shortest form that round-trips exactly.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "sphgp/empirical_bayes.hpp"
#include "sphgp/gneiting.hpp"
#include "sphgp/posterior.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp::io {

using Json = nlohmann::ordered_json;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<double> values;  // row-major

  std::size_t rows() const noexcept { return columns.empty() ? 0 : values.size() / columns.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * columns.size() + col]; }
  // Throws IoError if absent.
  std::size_t column(const std::string& name) const;
  std::string meta(const std::string& key) const;
  bool has_meta(const std::string& key) const;
  void add_row(std::initializer_list<double> row);
  void add_row(const std::vector<double>& row);
};

std::string format_number(double v);
double parse_number(const std::string& s);

void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Columns t, r, n, j, value; metadata records TR, T, R.
void write_coefficients(const std::filesystem::path& path, const CoefficientField& c, const Metadata& meta = {});
CoefficientField read_coefficients(const std::filesystem::path& path);

// Columns lat_index, lon_index, colat, lon, value.
void write_field(const std::filesystem::path& path, const FieldSample& f, const Metadata& meta = {});

Json hyperparams_to_json(const HyperparamVector& hp);
HyperparamVector hyperparams_from_json(const Json& j);

// Columns index, subfamily (1 or 2), gamma, nu, varpi, alpha, beta, sigma.
void write_hyperparams(const std::filesystem::path& path, const std::vector<HyperparamVector>& hps,
                       const Metadata& meta = {});
std::vector<HyperparamVector> read_hyperparams(const std::filesystem::path& path);

// Per-t selections (t, candidate, hyperparameters, loglik, std_error).
void write_estimates(const std::filesystem::path& path, const TimeVaryingEstimates& e, const Metadata& meta = {});
TimeVaryingEstimates read_estimates(const std::filesystem::path& path);
// Long form candidate, t, loglik.
void write_loglik_table(const std::filesystem::path& path, const TimeVaryingEstimates& e, const Metadata& meta = {});

// Columns n, t, emqe.
void write_emqe(const std::filesystem::path& path, const EmqeMatrix& e, const Metadata& meta = {});
EmqeMatrix read_emqe(const std::filesystem::path& path);

// Columns n, lag, value.
void write_spectrum(const std::filesystem::path& path, const AngularSpectrum& sp, const Metadata& meta = {});

}  // namespace sphgp::io
