#include "paretobin/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "paretobin/errors.hpp"

namespace paretobin {

std::string fmt_float(double x, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, x);
  return buf;
}

void write_frontier(std::ostream& out, const std::vector<ParetoPoint>& points, int N) {
  out << "H,I,M,provenance,cuts\n";
  for (const ParetoPoint& p : points) {
    out << fmt_float(p.H, 12) << ',' << fmt_float(p.I, 12) << ',' << p.M << ','
        << provenance_name(p.provenance) << ',';
    for (std::size_t i = 0; i < p.binning.cuts.size(); ++i) {
      if (i) out << ';';
      out << fmt_float(p.binning.cuts[i] / N, 12);
    }
    out << '\n';
  }
}

std::vector<FrontierRow> read_frontier(std::istream& in) {
  std::vector<FrontierRow> rows;
  std::string line;
  long line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("H,I,M,provenance", 0) != 0)
        throw parse_error("expected frontier header, got \"" + line + "\"", line_no);
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    FrontierRow r;
    try {
      std::getline(ss, field, ',');
      r.H = std::stod(field);
      std::getline(ss, field, ',');
      r.I = std::stod(field);
      std::getline(ss, field, ',');
      r.M = std::stoi(field);
      std::getline(ss, r.provenance, ',');
      if (std::getline(ss, field, ',') && !field.empty()) {
        std::stringstream cs(field);
        std::string c;
        while (std::getline(cs, c, ';'))
          if (!c.empty()) r.cuts01.push_back(std::stod(c));
      }
    } catch (const std::exception&) {
      throw parse_error("malformed frontier row \"" + line + "\"", line_no);
    }
    rows.push_back(std::move(r));
  }
  if (!header) throw parse_error("empty frontier file");
  return rows;
}

std::vector<FrontierRow> read_frontier_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open frontier file: " + path);
  return read_frontier(in);
}

void write_samples(std::ostream& out, const SampleSet& s) {
  out << "w,y\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << fmt_float(s.w[i], 17) << ',' << s.y[i] << '\n';
}

void write_microbin_model(std::ostream& out, const MicroBinModel& m) {
  out << "N " << m.N << "\n";
  out << "sorted " << (m.sorted ? 1 : 0) << "\n";
  out << "p1";
  for (double p : m.p1) out << ' ' << fmt_float(p, 17);
  out << "\n";
}

MicroBinModel read_microbin_model(std::istream& in) {
  MicroBinModel m;
  std::string key;
  bool have_n = false, have_p1 = false;
  while (in >> key) {
    if (key == "N") {
      in >> m.N;
      have_n = true;
    } else if (key == "sorted") {
      int s;
      in >> s;
      m.sorted = s != 0;
    } else if (key == "p1") {
      if (!have_n) throw parse_error("p1 before N in micro-bin model");
      m.p1.resize(static_cast<std::size_t>(m.N));
      for (double& p : m.p1)
        if (!(in >> p)) throw parse_error("truncated p1 vector");
      have_p1 = true;
    } else {
      throw parse_error("unknown micro-bin model key: " + key);
    }
  }
  if (!have_n || !have_p1) throw parse_error("micro-bin model missing N or p1");
  m.mass.assign(static_cast<std::size_t>(m.N), 1.0 / m.N);
  m.permutation.resize(static_cast<std::size_t>(m.N));
  for (int j = 0; j < m.N; ++j) m.permutation[static_cast<std::size_t>(j)] = j;
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_numbers(const std::string& s, long line_no) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw parse_error("expected a number, got \"" + tok + "\"", line_no);
    }
  }
  return v;
}

FitParams expbeta_params(const std::vector<double>& coeffs, int degree, long line_no) {
  if (coeffs.size() != static_cast<std::size_t>(degree) + 3)
    throw parse_error("expbeta class row needs degree+3 coefficients", line_no);
  FitParams p;
  p.degree = degree;
  p.a = coeffs;
  return p;
}

CifarFitParams cifar_params(const std::vector<double>& a_row, const std::vector<double>& b_row,
                            bool flip, long line_no) {
  if (a_row.size() != 6) throw parse_error("branchA needs 6 numbers (weight + a1..a5)", line_no);
  if (b_row.size() != 5) throw parse_error("branchB needs 5 numbers (a1..a5)", line_no);
  CifarFitParams p;
  std::copy(a_row.begin(), a_row.end(), p.branch_a.begin());
  std::copy(b_row.begin(), b_row.end(), p.branch_b.begin());
  p.flip = flip;
  return p;
}

}  // namespace

ModelSpec load_model_spec(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::map<std::string, long> kv_line;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::stringstream ss(line.substr(start));
    std::string key;
    ss >> key;
    std::string rest;
    std::getline(ss, rest);
    if (kv.count(key)) throw parse_error("duplicate key \"" + key + "\"", line_no);
    kv[key] = rest;
    kv_line[key] = line_no;
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw parse_error("model spec missing key \"" + key + "\"");
    return it->second;
  };

  ModelSpec spec;
  if (!kv.count("family")) throw parse_error("model spec missing key \"family\"");
  {
    std::stringstream ss(kv["family"]);
    ss >> spec.family;
  }

  if (spec.family == "analytic") {
    spec.model = std::make_shared<AnalyticToyModel>();
    return spec;
  }

  double prior = 0.5;
  if (kv.count("prior")) prior = parse_numbers(kv["prior"], kv_line["prior"]).at(0);

  if (spec.family == "expbeta") {
    const int degree = static_cast<int>(parse_numbers(need("degree"), kv_line["degree"]).at(0));
    FitParams f1 = expbeta_params(parse_numbers(need("class1"), kv_line["class1"]), degree,
                                  kv_line["class1"]);
    FitParams f2 = expbeta_params(parse_numbers(need("class2"), kv_line["class2"]), degree,
                                  kv_line["class2"]);
    spec.model = std::make_shared<ExpBetaModel>(f1, f2, prior);
    return spec;
  }

  if (spec.family == "cifarcdf") {
    auto flip_of = [&](const std::string& key) {
      if (!kv.count(key)) return false;
      std::string v;
      std::stringstream ss(kv[key]);
      ss >> v;
      return v == "true" || v == "1";
    };
    CifarFitParams c1 =
        cifar_params(parse_numbers(need("class1.branchA"), kv_line["class1.branchA"]),
                     parse_numbers(need("class1.branchB"), kv_line["class1.branchB"]),
                     flip_of("class1.flip"), kv_line["class1.branchA"]);
    CifarFitParams c2 =
        cifar_params(parse_numbers(need("class2.branchA"), kv_line["class2.branchA"]),
                     parse_numbers(need("class2.branchB"), kv_line["class2.branchB"]),
                     flip_of("class2.flip"), kv_line["class2.branchA"]);
    spec.model = std::make_shared<CifarCdfModel>(c1, c2, prior);
    return spec;
  }

  throw parse_error("unknown model family \"" + spec.family + "\"");
}

ModelSpec load_model_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open model spec: " + path);
  return load_model_spec(in);
}

}  // namespace paretobin
