#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <sstream>

#include "doctest.h"
#include "popphase/io.hpp"
#include "popphase/synthgen.hpp"

using namespace popphase;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/popphase_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("dataset text round-trips byte-identically") {
  SimSpec spec;
  spec.populations = 3;
  spec.individuals_per_pop = 4;
  spec.n_loci = 7;
  spec.seed = 10;
  auto [data, truth] = generate(spec);
  // sprinkle in missing sites
  data.populations[1].individuals[2].genotype[3] = GenotypeSite::missing();
  data.populations[0].individuals[0].genotype[0] = GenotypeSite::missing();

  const std::string text = dataset_to_string(data);
  std::istringstream in(text);
  const Dataset back = read_dataset(in, "mem");
  CHECK(dataset_to_string(back) == text);
  CHECK(validate_dataset(back).empty());
}

TEST_CASE("general alphabets use pair tokens and round-trip") {
  Dataset d;
  d.alphabet.size = 4;
  Population p;
  p.id = "p1";
  p.individuals.push_back({"a", {GenotypeSite{0, 3}, GenotypeSite{2, 2}, GenotypeSite::missing()}});
  d.populations.push_back(p);
  const std::string text = dataset_to_string(d);
  CHECK(text.find("#alphabet 4") != std::string::npos);
  CHECK(text.find("0/3") != std::string::npos);
  std::istringstream in(text);
  const Dataset back = read_dataset(in, "mem");
  CHECK(dataset_to_string(back) == text);
}

TEST_CASE("parse errors carry the source line") {
  const std::string bad = "#loci 3\nind1 p1 0 1\n";
  std::istringstream in(bad);
  try {
    read_dataset(in, "input.txt");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("input.txt:2:") != std::string::npos);
  }

  const std::string badtok = "#loci 2\nind1 p1 0 x\n";
  std::istringstream in2(badtok);
  CHECK_THROWS_AS(read_dataset(in2, "t"), InputError);
}

TEST_CASE("truth sidecar round-trips through files") {
  SimSpec spec;
  spec.populations = 2;
  spec.individuals_per_pop = 3;
  spec.n_loci = 5;
  spec.seed = 77;
  auto [data, truth] = generate(spec);

  TempFile f("truth.txt");
  write_truth_file(f.path, truth, data);
  std::vector<std::string> pops;
  const GroundTruth back = read_truth_file(f.path, &pops);

  CHECK(back.shared_count == truth.shared_count);
  CHECK(back.founders == truth.founders);
  CHECK(back.pop_founders == truth.pop_founders);
  REQUIRE(back.individuals.size() == truth.individuals.size());
  for (size_t i = 0; i < truth.individuals.size(); ++i) {
    CHECK(back.individuals[i].id == truth.individuals[i].id);
    CHECK(back.individuals[i].pop == truth.individuals[i].pop);
    CHECK(back.individuals[i].founder == truth.individuals[i].founder);
    CHECK(back.individuals[i].haplotype[0] == truth.individuals[i].haplotype[0]);
    CHECK(back.individuals[i].haplotype[1] == truth.individuals[i].haplotype[1]);
  }
  CHECK(pops == std::vector<std::string>{"pop1", "pop2"});
}

TEST_CASE("phase files round-trip") {
  PhasingResult r;
  r.alphabet.size = 2;
  IndividualPhase a;
  a.id = "x";
  a.population = "p1";
  a.h0 = {0, 1, 0};
  a.h1 = {1, 1, 0};
  IndividualPhase b;
  b.id = "y";
  b.population = "p2";
  b.h0 = {0, 0, 0};
  b.h1 = {0, 0, 1};
  r.individuals = {a, b};

  TempFile f("phase.txt");
  write_phase_file(f.path, r);
  const auto back = read_phase_file(f.path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "x");
  CHECK(back[0].h0 == a.h0);
  CHECK(back[0].h1 == a.h1);
  CHECK(back[1].population == "p2");
}

TEST_CASE("oracle instance files parse headers and data") {
  TempFile f("oracle.txt");
  write_file(f.path,
             "#loci 2\n#tau 0.5\n#kmax 3\n#pin_xi 0\n#alpha_h 2\n#beta_h 5\n"
             "i1 p1 1 0\n"
             "i2 p1 1 1\n");
  const OracleInstance inst = read_oracle_instance_file(f.path);
  CHECK(inst.tau == doctest::Approx(0.5));
  CHECK(inst.k_max == 3);
  CHECK(inst.pin_xi == false);
  CHECK(inst.hp.alpha_h == doctest::Approx(2));
  CHECK(inst.data.total_individuals() == 2);
  CHECK(inst.data.populations[0].individuals[0].genotype[0].is_het());
}

TEST_CASE("haplotype strings for narrow and wide alphabets") {
  CHECK(hap_to_string({0, 1, 1, 0}) == "0110");
  const AlleleAlphabet ab{2};
  CHECK(parse_hap("0110", 4, ab) == Haplotype{0, 1, 1, 0});
  const AlleleAlphabet wide{16};
  CHECK(hap_to_string({0, 12, 3}) == "0,12,3");
  CHECK(parse_hap("0,12,3", 3, wide) == Haplotype{0, 12, 3});
  CHECK_THROWS_AS(parse_hap("012", 2, ab), InputError);
}

TEST_CASE("digest is stable") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("popphase") == fnv1a64("popphase"));
  CHECK(fnv1a64("a") != fnv1a64("b"));
}

TEST_CASE("score and manifest writers") {
  PhasingScore s;
  s.err_s = 0.125;
  s.mismatches = 1;
  s.nontrivial_sites = 8;
  s.n_ambiguous = 2;
  IndividualScore row;
  row.id = "x";
  row.population = "p1";
  row.n_het = 4;
  row.nontrivial = 4;
  row.mismatches = 1;
  row.d_w = 1;
  s.rows = {row};

  const std::string kv = scores_kv_to_string(s, {{"kl_all", 0.5}});
  CHECK(kv.find("err_s = 0.125") != std::string::npos);
  CHECK(kv.find("kl_all = 0.5") != std::string::npos);

  const std::string csv = scores_csv_to_string(s);
  CHECK(csv.find("individual,population,n_het,nontrivial,mismatches,err_s,d_w") == 0);
  CHECK(csv.find("x,p1,4,4,1,0.25,1") != std::string::npos);

  TempFile f("manifest.txt");
  write_manifest(f.path, {{"command", "phase"}, {"seed", "7"}});
  const std::string m = read_file(f.path);
  CHECK(m == "command = phase\nseed = 7\n");
}
