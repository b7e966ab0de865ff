#include "sphgp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sphgp/errors.hpp"

namespace sphgp::io {

namespace fs = std::filesystem;

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw IoError("table has no column '" + name + "'");
}

std::string Table::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  throw IoError("table has no metadata key '" + key + "'");
}

bool Table::has_meta(const std::string& key) const {
  for (const auto& kv : metadata)
    if (kv.first == key) return true;
  return false;
}

void Table::add_row(std::initializer_list<double> row) { add_row(std::vector<double>(row)); }

void Table::add_row(const std::vector<double>& row) {
  if (row.size() != columns.size()) throw ShapeError("Table::add_row: row width does not match columns");
  values.insert(values.end(), row.begin(), row.end());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& s) {
  if (s == "nan" || s == "NaN") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e) throw IoError("cannot parse number '" + s + "'");
  return v;
}

void write_csv(const fs::path& path, const Table& table) {
  if (!table.columns.empty() && table.values.size() % table.columns.size() != 0)
    throw ShapeError("write_csv: ragged table");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& [k, v] : table.metadata) out << "# " << k << '=' << v << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  const std::size_t w = table.columns.size();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < w; ++c) out << (c ? "," : "") << format_number(table.values[r * w + c]);
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Table t;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        t.metadata.emplace_back(body, "");
      else
        t.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      header = true;
      continue;
    }
    std::size_t n = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        t.values.push_back(parse_number(cell));
      } catch (const IoError& e) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      ++n;
    }
    if (n != t.columns.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                    " cells, found " + std::to_string(n));
  }
  if (!header) throw IoError("'" + path.string() + "' has no header row");
  return t;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

namespace {

std::size_t meta_size(const Table& t, const std::string& key) {
  return static_cast<std::size_t>(std::stoull(t.meta(key)));
}

// Keys already in `base` win over duplicates in `extra`.
Metadata with(Metadata base, const Metadata& extra) {
  for (const auto& kv : extra) {
    bool dup = false;
    for (const auto& b : base) dup = dup || b.first == kv.first;
    if (!dup) base.push_back(kv);
  }
  return base;
}

}  // namespace

void write_coefficients(const fs::path& path, const CoefficientField& c, const Metadata& meta) {
  Table t;
  t.metadata = with({{"TR", std::to_string(c.truncation())},
                     {"T", std::to_string(c.times())},
                     {"R", std::to_string(c.replicates())}},
                    meta);
  t.columns = {"t", "r", "n", "j", "value"};
  t.values.reserve(c.raw().size() * 5);
  for (std::size_t ti = 0; ti < c.times(); ++ti)
    for (std::size_t r = 0; r < c.replicates(); ++r)
      for (int n = 0; n <= c.truncation(); ++n)
        for (int j = 1; j <= 2 * n + 1; ++j)
          t.add_row({static_cast<double>(ti), static_cast<double>(r), static_cast<double>(n), static_cast<double>(j),
                     c.at(n, j, ti, r)});
  write_csv(path, t);
}

CoefficientField read_coefficients(const fs::path& path) {
  const Table t = read_csv(path);
  const int tr = static_cast<int>(meta_size(t, "TR"));
  CoefficientField c(tr, meta_size(t, "T"), meta_size(t, "R"));
  const std::size_t ct = t.column("t"), cr = t.column("r"), cn = t.column("n"), cj = t.column("j"),
                    cv = t.column("value");
  if (t.rows() != c.raw().size())
    throw IoError("'" + path.string() + "': expected " + std::to_string(c.raw().size()) + " coefficient rows");
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const auto ti = static_cast<std::size_t>(t.at(i, ct));
    const auto r = static_cast<std::size_t>(t.at(i, cr));
    const int n = static_cast<int>(t.at(i, cn));
    const int j = static_cast<int>(t.at(i, cj));
    if (ti >= c.times() || r >= c.replicates() || n < 0 || n > tr || j < 1 || j > 2 * n + 1)
      throw IoError("'" + path.string() + "': coefficient index out of range at row " + std::to_string(i));
    c.at(n, j, ti, r) = t.at(i, cv);
  }
  return c;
}

void write_field(const fs::path& path, const FieldSample& f, const Metadata& meta) {
  Table t;
  t.metadata = with({{"N_lat", std::to_string(f.grid->n_lat())}, {"N_lon", std::to_string(f.grid->n_lon())}}, meta);
  t.columns = {"lat_index", "lon_index", "colat", "lon", "value"};
  for (std::size_t a = 0; a < f.grid->n_lat(); ++a)
    for (std::size_t b = 0; b < f.grid->n_lon(); ++b)
      t.add_row({static_cast<double>(a), static_cast<double>(b), f.grid->colatitudes[a], f.grid->longitudes[b],
                 f.at(a, b)});
  write_csv(path, t);
}

Json hyperparams_to_json(const HyperparamVector& hp) {
  Json j;
  j["subfamily"] = std::string(subfamily_name(hp.subfamily));
  if (hp.subfamily == Subfamily::S1) {
    j["gamma"] = hp.gamma;
    j["nu"] = hp.nu;
  } else {
    j["varpi"] = hp.varpi;
  }
  j["alpha"] = hp.alpha;
  j["beta"] = hp.beta;
  j["sigma"] = hp.sigma;
  return j;
}

HyperparamVector hyperparams_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("hyperparameters", "expected an object");
  HyperparamVector hp;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "subfamily") {
      if (!it->is_string()) throw ConfigError("hyperparameters.subfamily", "expected a string");
      hp.subfamily = parse_subfamily(it->get<std::string>());
      continue;
    }
    if (!it->is_number()) throw ConfigError("hyperparameters." + k, "expected a number");
    const double v = it->get<double>();
    if (k == "gamma") hp.gamma = v;
    else if (k == "nu") hp.nu = v;
    else if (k == "varpi") hp.varpi = v;
    else if (k == "alpha") hp.alpha = v;
    else if (k == "beta") hp.beta = v;
    else if (k == "sigma") hp.sigma = v;
    else throw ConfigError("hyperparameters." + k, "unknown key");
  }
  try {
    hp.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError("hyperparameters", e.what());
  }
  return hp;
}

namespace {

std::vector<double> hp_row(double lead, const HyperparamVector& hp) {
  return {lead, hp.subfamily == Subfamily::S1 ? 1.0 : 2.0, hp.gamma, hp.nu, hp.varpi, hp.alpha, hp.beta, hp.sigma};
}

HyperparamVector hp_from_row(const Table& t, std::size_t i, std::size_t first) {
  HyperparamVector hp;
  hp.subfamily = t.at(i, first) == 2.0 ? Subfamily::S2 : Subfamily::S1;
  hp.gamma = t.at(i, first + 1);
  hp.nu = t.at(i, first + 2);
  hp.varpi = t.at(i, first + 3);
  hp.alpha = t.at(i, first + 4);
  hp.beta = t.at(i, first + 5);
  hp.sigma = t.at(i, first + 6);
  return hp;
}

const std::vector<std::string> kHpColumns = {"subfamily", "gamma", "nu", "varpi", "alpha", "beta", "sigma"};

}  // namespace

void write_hyperparams(const fs::path& path, const std::vector<HyperparamVector>& hps, const Metadata& meta) {
  Table t;
  t.metadata = with({{"subfamily_code", "1=S1,2=S2"}}, meta);
  t.columns = {"index"};
  t.columns.insert(t.columns.end(), kHpColumns.begin(), kHpColumns.end());
  for (std::size_t m = 0; m < hps.size(); ++m) t.add_row(hp_row(static_cast<double>(m), hps[m]));
  write_csv(path, t);
}

std::vector<HyperparamVector> read_hyperparams(const fs::path& path) {
  const Table t = read_csv(path);
  const std::size_t first = t.column("subfamily");
  std::vector<HyperparamVector> out;
  for (std::size_t i = 0; i < t.rows(); ++i) out.push_back(hp_from_row(t, i, first));
  return out;
}

void write_estimates(const fs::path& path, const TimeVaryingEstimates& e, const Metadata& meta) {
  Table t;
  t.metadata = with({{"TR", std::to_string(e.truncation)},
                     {"T", std::to_string(e.times)},
                     {"M", std::to_string(e.candidates)},
                     {"subfamily_code", "1=S1,2=S2"}},
                    meta);
  t.columns = {"t", "candidate"};
  t.columns.insert(t.columns.end(), kHpColumns.begin(), kHpColumns.end());
  t.columns.push_back("loglik");
  t.columns.push_back("std_error");
  for (std::size_t ti = 0; ti < e.times; ++ti) {
    std::vector<double> row = hp_row(static_cast<double>(ti), e.selected[ti]);
    row.insert(row.begin() + 1, static_cast<double>(e.index[ti]));
    row.push_back(e.loglik[ti]);
    row.push_back(e.std_error[ti]);
    t.add_row(row);
  }
  write_csv(path, t);
}

TimeVaryingEstimates read_estimates(const fs::path& path) {
  const Table t = read_csv(path);
  TimeVaryingEstimates e;
  e.truncation = static_cast<int>(meta_size(t, "TR"));
  e.times = meta_size(t, "T");
  e.candidates = meta_size(t, "M");
  if (t.rows() != e.times) throw IoError("'" + path.string() + "': expected one row per time point");
  const std::size_t cc = t.column("candidate"), cs = t.column("subfamily"), cl = t.column("loglik"),
                    ce = t.column("std_error");
  for (std::size_t i = 0; i < t.rows(); ++i) {
    e.index.push_back(static_cast<std::size_t>(t.at(i, cc)));
    e.selected.push_back(hp_from_row(t, i, cs));
    e.loglik.push_back(t.at(i, cl));
    e.std_error.push_back(t.at(i, ce));
  }
  return e;
}

void write_loglik_table(const fs::path& path, const TimeVaryingEstimates& e, const Metadata& meta) {
  Table t;
  t.metadata = with({{"M", std::to_string(e.candidates)}, {"T", std::to_string(e.times)}}, meta);
  t.columns = {"candidate", "t", "loglik"};
  for (std::size_t m = 0; m < e.candidates; ++m)
    for (std::size_t ti = 0; ti < e.times; ++ti)
      t.add_row({static_cast<double>(m), static_cast<double>(ti), e.table_at(m, ti)});
  write_csv(path, t);
}

void write_emqe(const fs::path& path, const EmqeMatrix& e, const Metadata& meta) {
  Table t;
  t.metadata = with({{"TR", std::to_string(e.truncation)},
                     {"T", std::to_string(e.times)},
                     {"emqe_divisor", "2n+1"}},
                    meta);
  t.columns = {"n", "t", "emqe"};
  for (int n = 0; n <= e.truncation; ++n)
    for (std::size_t ti = 0; ti < e.times; ++ti)
      t.add_row({static_cast<double>(n), static_cast<double>(ti), e.at(n, ti)});
  write_csv(path, t);
}

EmqeMatrix read_emqe(const fs::path& path) {
  const Table t = read_csv(path);
  EmqeMatrix e;
  e.truncation = static_cast<int>(meta_size(t, "TR"));
  e.times = meta_size(t, "T");
  e.values.assign(static_cast<std::size_t>(e.truncation + 1) * e.times, 0.0);
  if (t.rows() != e.values.size()) throw IoError("'" + path.string() + "': wrong number of EMQE rows");
  const std::size_t cn = t.column("n"), ct = t.column("t"), cv = t.column("emqe");
  for (std::size_t i = 0; i < t.rows(); ++i)
    e.values[static_cast<std::size_t>(t.at(i, cn)) * e.times + static_cast<std::size_t>(t.at(i, ct))] = t.at(i, cv);
  return e;
}

void write_spectrum(const fs::path& path, const AngularSpectrum& sp, const Metadata& meta) {
  Table t;
  t.metadata = with({{"TR", std::to_string(sp.truncation())}, {"lags", std::to_string(sp.lag_count())}}, meta);
  t.columns = {"n", "lag", "value"};
  for (int n = 0; n <= sp.truncation(); ++n)
    for (std::size_t l = 0; l < sp.lag_count(); ++l) t.add_row({static_cast<double>(n), sp.lags()[l], sp.at(n, l)});
  write_csv(path, t);
}

}  // namespace sphgp::io
