#include "robgxe/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "robgxe/errors.hpp"
#include "robgxe/format.hpp"

namespace robgxe {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

// Reads every non-blank line; returns header fields and the rows with their
// 1-based line numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

CsvTable read_csv(const fs::path& path) {
  auto in = open_in(path);
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    std::vector<std::string> owned(fields.begin(), fields.end());
    if (!have_header) {
      t.header = std::move(owned);
      have_header = true;
      if (lineno != 1) throw ParseError(path.string(), lineno, 0, "header must be on the first line");
      continue;
    }
    if (owned.size() != t.header.size()) {
      throw ParseError(path.string(), lineno, 0,
                       "expected " + std::to_string(t.header.size()) + " fields, found " + std::to_string(owned.size()));
    }
    t.rows.emplace_back(lineno, std::move(owned));
  }
  if (!have_header) throw ParseError(path.string(), 1, 0, "missing header");
  return t;
}

double parse_cell(const fs::path& path, std::size_t row, std::size_t col, const std::string& text) {
  double v;
  if (!parse_double(text, v) || !std::isfinite(v)) {
    throw ParseError(path.string(), row, col, "not a finite number: '" + text + "'");
  }
  return v;
}

std::size_t parse_index(const fs::path& path, std::size_t row, std::size_t col, const std::string& text) {
  double v;
  if (!parse_double(text, v) || v < 1.0 || v != std::floor(v) || v > 1e15) {
    throw ParseError(path.string(), row, col, "expected a 1-based index, found '" + text + "'");
  }
  return static_cast<std::size_t>(v) - 1;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace

Dataset load_dataset(const fs::path& path, bool genotype) {
  const auto t = read_csv(path);
  enum Role { Y, E, C, X };
  std::vector<Role> roles;
  std::size_t counts[4] = {0, 0, 0, 0};
  static const std::regex named("([ECX])[0-9]+");
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const auto& h = t.header[c];
    Role r;
    if (h == "y") {
      r = Y;
    } else if (std::smatch mt; std::regex_match(h, mt, named)) {
      r = mt[1] == "E" ? E : (mt[1] == "C" ? C : X);
    } else {
      throw ParseError(path.string(), 1, c + 1, "unrecognised column '" + h + "' (expected y, E<k>, C<k> or X<k>)");
    }
    roles.push_back(r);
    ++counts[r];
  }
  if (counts[Y] != 1) throw ParseError(path.string(), 1, 0, "header needs exactly one 'y' column");
  if (counts[E] == 0) throw ParseError(path.string(), 1, 0, "header has no environment (E) column");
  if (counts[X] == 0) throw ParseError(path.string(), 1, 0, "header has no genetic (X) column");

  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Dataset d;
  d.y.resize(n);
  d.E.resize(n, static_cast<Eigen::Index>(counts[E]));
  d.C.resize(n, static_cast<Eigen::Index>(counts[C]));
  d.X.resize(n, static_cast<Eigen::Index>(counts[X]));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [lineno, fields] = t.rows[static_cast<std::size_t>(i)];
    Eigen::Index ie = 0, ic = 0, ix = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_cell(path, lineno, c + 1, fields[c]);
      switch (roles[c]) {
        case Y: d.y[i] = v; break;
        case E: d.E(i, ie++) = v; break;
        case C: d.C(i, ic++) = v; break;
        case X:
          if (genotype && v != 0.0 && v != 1.0 && v != 2.0) {
            throw ParseError(path.string(), lineno, c + 1, "genotype must be 0, 1 or 2, found '" + fields[c] + "'");
          }
          d.X(i, ix++) = v;
          break;
      }
    }
  }
  d.validate();
  return d;
}

void write_dataset(const Dataset& data, const fs::path& path) {
  auto out = open_out(path);
  std::vector<std::string> header{"y"};
  for (std::size_t k = 0; k < data.q(); ++k) header.push_back("E" + std::to_string(k + 1));
  for (std::size_t t = 0; t < data.m(); ++t) header.push_back("C" + std::to_string(t + 1));
  for (std::size_t j = 0; j < data.p(); ++j) header.push_back("X" + std::to_string(j + 1));
  out << join(header) << '\n';
  std::string line;
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    line = format_double(data.y[i]);
    auto add_row = [&](const Matrix& M) {
      for (Eigen::Index c = 0; c < M.cols(); ++c) {
        line += ',';
        line += format_double(M(i, c));
      }
    };
    add_row(data.E);
    add_row(data.C);
    add_row(data.X);
    out << line << '\n';
  }
  finish(out, path);
}

GroundTruth load_truth(const fs::path& path) {
  const auto t = read_csv(path);
  if (t.header != std::vector<std::string>{"kind", "gene", "env", "value"}) {
    throw ParseError(path.string(), 1, 0, "truth header must be kind,gene,env,value");
  }
  GroundTruth g;
  std::map<std::size_t, double> alpha, gamma;
  for (const auto& [lineno, f] : t.rows) {
    const double value = parse_cell(path, lineno, 4, f[3]);
    if (f[0] == "main") {
      g.main_idx.push_back(parse_index(path, lineno, 2, f[1]));
      g.main_value.push_back(value);
    } else if (f[0] == "interaction") {
      g.int_idx.push_back({parse_index(path, lineno, 2, f[1]), parse_index(path, lineno, 3, f[2])});
      g.int_value.push_back(value);
    } else if (f[0] == "env" || f[0] == "clinical") {
      auto& target = f[0] == "env" ? alpha : gamma;
      if (!target.emplace(parse_index(path, lineno, 3, f[2]), value).second) {
        throw ParseError(path.string(), lineno, 3, "duplicate " + f[0] + " coefficient");
      }
    } else {
      throw ParseError(path.string(), lineno, 1, "unknown effect kind '" + f[0] + "'");
    }
  }
  auto dense = [&](const std::map<std::size_t, double>& m, const char* what) {
    std::vector<double> out;
    for (const auto& [idx, v] : m) {
      if (idx != out.size()) throw ParseError(path.string(), 0, 0, std::string(what) + " indices must be 1..k without gaps");
      out.push_back(v);
    }
    return out;
  };
  g.alpha = dense(alpha, "env");
  g.gamma = dense(gamma, "clinical");
  return g;
}

void write_truth(const GroundTruth& truth, const fs::path& path) {
  auto out = open_out(path);
  out << "kind,gene,env,value\n";
  for (std::size_t i = 0; i < truth.main_idx.size(); ++i) {
    out << "main," << truth.main_idx[i] + 1 << ",-," << format_double(truth.main_value[i]) << '\n';
  }
  for (std::size_t i = 0; i < truth.int_idx.size(); ++i) {
    out << "interaction," << truth.int_idx[i].gene + 1 << ',' << truth.int_idx[i].env + 1 << ','
        << format_double(truth.int_value[i]) << '\n';
  }
  for (std::size_t k = 0; k < truth.alpha.size(); ++k) {
    out << "env,-," << k + 1 << ',' << format_double(truth.alpha[k]) << '\n';
  }
  for (std::size_t t = 0; t < truth.gamma.size(); ++t) {
    out << "clinical,-," << t + 1 << ',' << format_double(truth.gamma[t]) << '\n';
  }
  finish(out, path);
}

namespace {

void write_effect_row(std::ofstream& out, const std::string& gene, const std::string& kind, const std::string& env,
                      const EffectSummary* e) {
  constexpr double na = std::numeric_limits<double>::quiet_NaN();
  out << gene << ',' << kind << ',' << env << ',' << format_double(e ? e->median : na) << ','
      << format_double(e ? e->score() : 0.0) << ',' << format_double(e ? e->lower95 : na) << ','
      << format_double(e ? e->upper95 : na) << ',' << format_double(e ? e->psrf : na) << '\n';
}

}  // namespace

void write_results(std::span<const PosteriorSummary> scan, const fs::path& path) {
  auto out = open_out(path);
  out << "gene,kind,env,median,score,lower95,upper95,psrf\n";
  for (const auto& s : scan) {
    const std::string gene = std::to_string(s.gene + 1);
    write_effect_row(out, gene, "main", "-", s.ok ? &s.main() : nullptr);
    for (std::size_t k = 0; k < s.q; ++k) {
      write_effect_row(out, gene, "interaction", "E" + std::to_string(k + 1), s.ok ? &s.interaction(k) : nullptr);
    }
  }
  finish(out, path);
}

std::vector<EffectScore> load_scores(const fs::path& path) {
  const auto t = read_csv(path);
  auto col = [&](const std::string& name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw ParseError(path.string(), 1, 0, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - t.header.begin());
  };
  const std::size_t cg = col("gene"), ck = col("kind"), ce = col("env"), cs = col("score");
  std::vector<EffectScore> out;
  for (const auto& [lineno, f] : t.rows) {
    EffectScore e;
    e.gene = parse_index(path, lineno, cg + 1, f[cg]);
    e.score = parse_cell(path, lineno, cs + 1, f[cs]);
    if (f[ck] == "main") {
      e.kind = EffectKind::Main;
    } else if (f[ck] == "interaction") {
      e.kind = EffectKind::Interaction;
      const std::string& env = f[ce];
      if (env.size() < 2 || env[0] != 'E') throw ParseError(path.string(), lineno, ce + 1, "expected E<k>");
      e.env = parse_index(path, lineno, ce + 1, env.substr(1));
    } else {
      throw ParseError(path.string(), lineno, ck + 1, "unknown effect kind '" + f[ck] + "'");
    }
    out.push_back(e);
  }
  return out;
}

void write_fit_summary(const PosteriorSummary& s, const fs::path& path) {
  auto out = open_out(path);
  out << "kind,index,median,mean,lower95,upper95,inclusion,credible_score,psrf,psrf_upper\n";
  for (const auto& e : s.effects) {
    out << to_string(e.kind) << ',' << e.index + 1 << ',' << format_double(e.median) << ',' << format_double(e.mean)
        << ',' << format_double(e.lower95) << ',' << format_double(e.upper95) << ',' << format_double(e.inclusion)
        << ',' << format_double(e.credible_score) << ',' << format_double(e.psrf) << ','
        << format_double(e.psrf_upper) << '\n';
  }
  finish(out, path);
}

std::vector<std::string> draw_column_names(std::size_t q, std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < q; ++k) names.push_back("alpha" + std::to_string(k + 1));
  for (std::size_t t = 0; t < m; ++t) names.push_back("gamma" + std::to_string(t + 1));
  names.push_back("beta");
  for (std::size_t k = 0; k < q; ++k) names.push_back("eta" + std::to_string(k + 1));
  return names;
}

void write_draws(const ChainTrace& trace, const fs::path& path) {
  auto out = open_out(path);
  out << join(draw_column_names(trace.q, trace.m)) << '\n';
  std::string line;
  for (Eigen::Index r = 0; r < trace.draws.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < trace.draws.cols(); ++c) {
      if (c) line += ',';
      line += format_double(trace.draws(r, c));
    }
    out << line << '\n';
  }
  finish(out, path);
}

DrawSet load_draws(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("draws directory not found: " + dir.string());
  static const std::regex pattern("draws_chain([0-9]+)\\.csv");
  std::vector<std::pair<long, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (std::smatch mt; std::regex_match(name, mt, pattern)) files.emplace_back(std::stol(mt[1]), entry.path());
  }
  if (files.empty()) throw ConfigError("no draws_chain*.csv files in " + dir.string());
  std::sort(files.begin(), files.end());
  DrawSet set;
  for (const auto& [idx, file] : files) {
    const auto t = read_csv(file);
    if (set.names.empty()) {
      set.names = t.header;
    } else if (t.header != set.names) {
      throw ParseError(file.string(), 1, 0, "columns differ from the first chain");
    }
    Matrix M(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& [lineno, f] = t.rows[r];
      for (std::size_t c = 0; c < f.size(); ++c) {
        M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_cell(file, lineno, c + 1, f[c]);
      }
    }
    set.chains.push_back(std::move(M));
  }
  return set;
}

ConfigMap load_config(const fs::path& path) {
  auto in = open_in(path);
  ConfigMap out;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(path.string(), lineno, 0, "unterminated section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string(), lineno, 0, "expected key = value");
    const auto key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError(path.string(), lineno, 0, "empty key");
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    out[full] = std::string(trim(s.substr(eq + 1)));
  }
  return out;
}

void write_manifest(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& entries) {
  auto out = open_out(path);
  for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  finish(out, path);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

}  // namespace robgxe
