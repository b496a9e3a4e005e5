#include "popphase/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace popphase {

namespace {

[[noreturn]] void parse_fail(const std::string& src, int line, const std::string& msg) {
  throw InputError(src + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

GenotypeSite parse_site_token(const std::string& tok, const AlleleAlphabet& ab,
                              const std::string& src, int line) {
  if (tok == "?") return GenotypeSite::missing();
  const auto slash = tok.find('/');
  if (slash != std::string::npos) {
    try {
      const int a = std::stoi(tok.substr(0, slash));
      const int b = std::stoi(tok.substr(slash + 1));
      if (a < 0 || b < 0 || !ab.contains(static_cast<Allele>(a)) ||
          !ab.contains(static_cast<Allele>(b)))
        parse_fail(src, line, "allele outside alphabet in '" + tok + "'");
      return canonicalize_genotype(static_cast<Allele>(a), static_cast<Allele>(b), ab);
    } catch (const std::invalid_argument&) {
      parse_fail(src, line, "bad genotype token '" + tok + "'");
    }
  }
  if (ab.size != 2) parse_fail(src, line, "compact tokens need a biallelic alphabet");
  if (tok == "0") return GenotypeSite{0, 0};
  if (tok == "1") return GenotypeSite{0, 1};
  if (tok == "2") return GenotypeSite{1, 1};
  parse_fail(src, line, "bad genotype token '" + tok + "' (want 0|1|2|? or a/b)");
}

std::string site_token(const GenotypeSite& s, const AlleleAlphabet& ab) {
  if (s.is_missing()) return "?";
  if (ab.size == 2) {
    if (s.is_het()) return "1";
    return s.lo == 0 ? "0" : "2";
  }
  return std::to_string(static_cast<int>(s.lo)) + "/" + std::to_string(static_cast<int>(s.hi));
}

}  // namespace

std::string hap_to_string(const Haplotype& h) {
  bool wide = false;
  for (Allele a : h)
    if (a > 9) wide = true;
  std::string s;
  for (size_t t = 0; t < h.size(); ++t) {
    if (wide) {
      if (t) s += ',';
      s += std::to_string(static_cast<int>(h[t]));
    } else {
      s += static_cast<char>('0' + h[t]);
    }
  }
  return s;
}

Haplotype parse_hap(const std::string& s, int n_loci, const AlleleAlphabet& alphabet) {
  Haplotype h;
  if (s.find(',') != std::string::npos) {
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) h.push_back(static_cast<Allele>(std::stoi(tok)));
  } else {
    for (char c : s) {
      if (c < '0' || c > '9') throw InputError("bad allele character in '" + s + "'");
      h.push_back(static_cast<Allele>(c - '0'));
    }
  }
  if (static_cast<int>(h.size()) != n_loci)
    throw InputError("haplotype '" + s + "' has wrong length");
  for (Allele a : h)
    if (!alphabet.contains(a)) throw InputError("allele outside alphabet in '" + s + "'");
  return h;
}

Dataset read_dataset(std::istream& in, const std::string& src) {
  Dataset d;
  int T = -1;
  std::string line;
  int lineno = 0;
  std::map<std::string, int> pop_index;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto toks = split_ws(line);
      if (toks[0] == "#loci" && toks.size() == 2)
        T = std::stoi(toks[1]);
      else if (toks[0] == "#alphabet" && toks.size() == 2) {
        d.alphabet.size = std::stoi(toks[1]);
        d.alphabet.validate();
      }
      continue;
    }
    const auto toks = split_ws(line);
    if (T < 0) parse_fail(src, lineno, "missing '#loci <T>' header before records");
    if (static_cast<int>(toks.size()) != 2 + T)
      parse_fail(src, lineno,
                 "expected 2 + " + std::to_string(T) + " fields, got " +
                     std::to_string(toks.size()));
    const std::string& id = toks[0];
    const std::string& pop = toks[1];
    auto [it, fresh] = pop_index.emplace(pop, static_cast<int>(d.populations.size()));
    if (fresh) d.populations.push_back(Population{pop, {}});
    Genotype g(T);
    for (int t = 0; t < T; ++t) g[t] = parse_site_token(toks[2 + t], d.alphabet, src, lineno);
    d.populations[it->second].individuals.push_back({id, std::move(g)});
  }
  if (T < 0) throw InputError(src + ": empty dataset file");
  return d;
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_dataset(in, path);
}

std::string dataset_to_string(const Dataset& d) {
  std::ostringstream os;
  os << "#loci " << d.n_loci() << "\n";
  if (d.alphabet.size != 2) os << "#alphabet " << d.alphabet.size << "\n";
  for (const auto& pop : d.populations)
    for (const auto& ind : pop.individuals) {
      os << ind.id << " " << pop.id;
      for (const auto& s : ind.genotype) os << " " << site_token(s, d.alphabet);
      os << "\n";
    }
  return os.str();
}

void write_dataset_file(const std::string& path, const Dataset& d) {
  write_file(path, dataset_to_string(d));
}

std::string truth_to_string(const GroundTruth& t, const Dataset& data) {
  std::ostringstream os;
  os << "#loci " << (t.founders.empty() ? 0 : t.founders[0].size()) << "\n";
  os << "#shared " << t.shared_count << "\n";
  for (const auto& f : t.founders) os << "founder " << hap_to_string(f) << "\n";
  for (size_t j = 0; j < t.pop_founders.size(); ++j) {
    os << "pops " << data.populations[j].id;
    for (int k : t.pop_founders[j]) os << " " << k;
    os << "\n";
  }
  for (const auto& ti : t.individuals)
    for (int e = 0; e < 2; ++e)
      os << ti.id << " " << data.populations[ti.pop].id << " " << e << " " << ti.founder[e]
         << " " << hap_to_string(ti.haplotype[e]) << "\n";
  return os.str();
}

void write_truth_file(const std::string& path, const GroundTruth& t, const Dataset& data) {
  write_file(path, truth_to_string(t, data));
}

GroundTruth read_truth_file(const std::string& path, std::vector<std::string>* pop_ids) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  GroundTruth t;
  std::map<std::string, int> pop_index;
  std::map<std::string, size_t> ind_index;
  std::vector<std::string> pops;
  int T = -1;
  AlleleAlphabet ab{200};  // permissive; truth files carry raw symbols
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto toks = split_ws(line);
    if (toks[0] == "#loci") {
      T = std::stoi(toks[1]);
    } else if (toks[0] == "#shared") {
      t.shared_count = std::stoi(toks[1]);
    } else if (toks[0] == "founder") {
      t.founders.push_back(parse_hap(toks[1], T, ab));
    } else if (toks[0] == "pops") {
      pop_index.emplace(toks[1], static_cast<int>(pops.size()));
      pops.push_back(toks[1]);
      t.pop_founders.push_back({});
      for (size_t i = 2; i < toks.size(); ++i) t.pop_founders.back().push_back(std::stoi(toks[i]));
    } else {
      if (toks.size() != 5) parse_fail(path, lineno, "expected 'id pop e founder hap'");
      auto [pit, pfresh] = pop_index.emplace(toks[1], static_cast<int>(pops.size()));
      if (pfresh) {
        pops.push_back(toks[1]);
        t.pop_founders.push_back({});
      }
      auto it = ind_index.find(toks[0]);
      if (it == ind_index.end()) {
        it = ind_index.emplace(toks[0], t.individuals.size()).first;
        GroundTruth::TrueIndividual ti;
        ti.id = toks[0];
        ti.pop = pit->second;
        t.individuals.push_back(std::move(ti));
      }
      const int e = std::stoi(toks[2]);
      if (e != 0 && e != 1) parse_fail(path, lineno, "parental index must be 0 or 1");
      t.individuals[it->second].founder[e] = std::stoi(toks[3]);
      t.individuals[it->second].haplotype[e] = parse_hap(toks[4], T, ab);
    }
  }
  if (pop_ids) *pop_ids = pops;
  return t;
}

std::string phase_to_string(const PhasingResult& r) {
  std::ostringstream os;
  os << "#loci " << (r.individuals.empty() ? 0 : r.individuals[0].h0.size()) << "\n";
  for (const auto& p : r.individuals) {
    os << p.id << " " << p.population << " 0 " << hap_to_string(p.h0) << "\n";
    os << p.id << " " << p.population << " 1 " << hap_to_string(p.h1) << "\n";
  }
  return os.str();
}

void write_phase_file(const std::string& path, const PhasingResult& r) {
  write_file(path, phase_to_string(r));
}

std::vector<IndividualPhase> read_phase_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<IndividualPhase> out;
  std::map<std::string, size_t> index;
  AlleleAlphabet ab{200};
  int T = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto toks = split_ws(line);
    if (toks[0] == "#loci") {
      T = std::stoi(toks[1]);
      continue;
    }
    if (toks[0][0] == '#') continue;
    if (toks.size() != 4) parse_fail(path, lineno, "expected 'id pop e alleles'");
    auto it = index.find(toks[0]);
    if (it == index.end()) {
      it = index.emplace(toks[0], out.size()).first;
      IndividualPhase p;
      p.id = toks[0];
      p.population = toks[1];
      out.push_back(std::move(p));
    }
    const int e = std::stoi(toks[2]);
    Haplotype h = parse_hap(toks[3], T < 0 ? static_cast<int>(toks[3].size()) : T, ab);
    if (e == 0)
      out[it->second].h0 = std::move(h);
    else if (e == 1)
      out[it->second].h1 = std::move(h);
    else
      parse_fail(path, lineno, "parental index must be 0 or 1");
  }
  for (const auto& p : out)
    if (p.h0.empty() || p.h1.empty())
      throw InputError(path + ": individual " + p.id + " is missing a strand");
  return out;
}

std::string founder_report_to_string(const PhasingResult& r,
                                     const std::vector<std::string>& pop_ids) {
  std::ostringstream os;
  os.precision(6);
  os << "#pattern theta support populations frequencies\n";
  for (const auto& f : r.founders) {
    os << hap_to_string(f.pattern) << " " << std::fixed << f.theta_hat << " " << f.support << " ";
    if (f.populations.empty()) {
      os << "-";
    } else {
      for (size_t i = 0; i < f.populations.size(); ++i) {
        if (i) os << ",";
        os << (f.populations[i] < static_cast<int>(pop_ids.size()) ? pop_ids[f.populations[i]]
                                                                   : std::to_string(f.populations[i]));
      }
    }
    for (double x : f.pop_frequency) os << " " << x;
    os << "\n";
    os.unsetf(std::ios_base::floatfield);
  }
  return os.str();
}

std::string diagnostics_to_string(const PhasingResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << "model = " << r.model << "\n";
  os << "seed = " << r.seed << "\n";
  os << "k_mode = " << r.k_mode << "\n";
  os << "k_mean = " << r.k_mean << "\n";
  for (size_t j = 0; j < r.pop_k_mean.size(); ++j)
    os << "k_mean_pop" << (j + 1) << " = " << r.pop_k_mean[j] << "\n";
  os << "theta_hat = " << r.theta_hat << "\n";
  os << "n_founder_patterns = " << r.founders.size() << "\n";
  int repaired = 0;
  for (const auto& p : r.individuals) repaired += p.repaired_sites;
  os << "repaired_sites = " << repaired << "\n";
  os << "k_trace =";
  for (int k : r.k_trace) os << " " << k;
  os << "\n";
  os << "tau_trace_mean = ";
  double s = 0;
  for (double v : r.tau_trace) s += v;
  os << (r.tau_trace.empty() ? 0.0 : s / r.tau_trace.size()) << "\n";
  if (!r.gamma_trace.empty()) {
    double gs = 0;
    for (double v : r.gamma_trace) gs += v;
    os << "gamma_trace_mean = " << gs / r.gamma_trace.size() << "\n";
  }
  return os.str();
}

std::string scores_kv_to_string(const PhasingScore& s,
                                const std::vector<std::pair<std::string, double>>& extras) {
  std::ostringstream os;
  os.precision(10);
  os << "err_s = " << s.err_s << "\n";
  os << "err_s_macro = " << s.err_s_macro << "\n";
  os << "mismatches = " << s.mismatches << "\n";
  os << "nontrivial_sites = " << s.nontrivial_sites << "\n";
  os << "d_w_total = " << s.d_w_total << "\n";
  os << "n_ambiguous = " << s.n_ambiguous << "\n";
  for (const auto& [k, v] : extras) os << k << " = " << v << "\n";
  return os.str();
}

std::string scores_csv_to_string(const PhasingScore& s) {
  std::ostringstream os;
  os.precision(10);
  os << "individual,population,n_het,nontrivial,mismatches,err_s,d_w\n";
  for (const auto& r : s.rows) {
    const double e = r.nontrivial > 0 ? static_cast<double>(r.mismatches) / r.nontrivial : 0.0;
    os << r.id << "," << r.population << "," << r.n_het << "," << r.nontrivial << ","
       << r.mismatches << "," << e << "," << r.d_w << "\n";
  }
  return os.str();
}

OracleInstance read_oracle_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  OracleInstance inst;
  std::ostringstream data_lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "#tau")
      inst.tau = std::stod(toks[1]);
    else if (toks[0] == "#kmax")
      inst.k_max = std::stoi(toks[1]);
    else if (toks[0] == "#pin_xi")
      inst.pin_xi = std::stoi(toks[1]) != 0;
    else if (toks[0] == "#alpha_h")
      inst.hp.alpha_h = std::stod(toks[1]);
    else if (toks[0] == "#beta_h")
      inst.hp.beta_h = std::stod(toks[1]);
    else if (toks[0] == "#alpha_g")
      inst.hp.alpha_g = std::stod(toks[1]);
    else if (toks[0] == "#beta_g")
      inst.hp.beta_g = std::stod(toks[1]);
    else
      data_lines << line << "\n";
  }
  std::istringstream ds(data_lines.str());
  inst.data = read_dataset(ds, path);
  if (inst.data.n_populations() != 1)
    throw InputError(path + ": oracle instances must have exactly one population");
  return inst;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream os;
  for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
  write_file(path, os.str());
}

}  // namespace popphase
