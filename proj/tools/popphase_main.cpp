// popphase command line: simulate / phase / evaluate / oracle-check /
// experiment. File formats are documented in docs/formats.md.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "popphase/experiment.hpp"
#include "popphase/io.hpp"
#include "popphase/partition_ligation.hpp"

using namespace popphase;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_hyper_flags(CLI::App* cmd, Hyperparams& hp) {
  cmd->add_option("--alpha-h", hp.alpha_h, "Beta prior pseudo-count for mutations");
  cmd->add_option("--beta-h", hp.beta_h, "Beta prior pseudo-count for matches");
  cmd->add_option("--alpha-g", hp.alpha_g, "Beta prior pseudo-count for exact genotypes");
  cmd->add_option("--beta-g", hp.beta_g, "Beta prior pseudo-count for genotype errors");
  cmd->add_option("--iota", hp.iota, "inverse-gamma shape for gamma/tau hyperpriors");
  cmd->add_option("--kappa", hp.kappa, "inverse-gamma scale for gamma/tau hyperpriors");
}

PhasingResult merge_per_population(std::vector<PhasingResult> parts, const Dataset& data,
                                   const char* model) {
  PhasingResult out;
  out.model = model;
  out.alphabet = data.alphabet;
  out.hap_frequencies.resize(parts.size());
  int k_sum = 0;
  for (size_t j = 0; j < parts.size(); ++j) {
    for (auto& p : parts[j].individuals) out.individuals.push_back(std::move(p));
    out.hap_frequencies[j] = parts[j].hap_frequencies.empty() ? std::map<Haplotype, double>{}
                                                              : parts[j].hap_frequencies[0];
    k_sum += parts[j].k_mode;
    out.pop_k_mean.push_back(parts[j].k_mean);
    for (auto& f : parts[j].founders) out.founders.push_back(std::move(f));
  }
  out.k_mode = k_sum;
  return out;
}

int cmd_simulate(const std::string& out_prefix, SimSpec spec, const std::string& founder_file) {
  if (!founder_file.empty()) {
    const std::string text = read_file(founder_file);
    std::istringstream is(text);
    std::string line;
    AlleleAlphabet ab{spec.alphabet_size};
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      spec.founder_pool.push_back(parse_hap(line, spec.n_loci, ab));
    }
  }
  auto [data, truth] = generate(spec);
  write_dataset_file(out_prefix + ".genotypes.txt", data);
  write_truth_file(out_prefix + ".truth.txt", truth, data);
  write_manifest(out_prefix + ".manifest",
                 {{"command", "simulate"},
                  {"version", kVersion},
                  {"seed", std::to_string(spec.seed)},
                  {"populations", std::to_string(spec.populations)},
                  {"individuals_per_pop", std::to_string(spec.individuals_per_pop)},
                  {"founders_per_pop", std::to_string(spec.founders_per_pop)},
                  {"shared_founders", std::to_string(spec.shared_founders)},
                  {"loci", std::to_string(spec.n_loci)},
                  {"theta", std::to_string(spec.theta)},
                  {"genotype_error", std::to_string(spec.genotype_error)},
                  {"alphabet", std::to_string(spec.alphabet_size)}});
  std::cout << "wrote " << out_prefix << ".genotypes.txt (+truth, manifest)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-population haplotype phasing via nested-urn Gibbs sampling"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "flat key = value config file; flags win");
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--seed", common.seed, "master RNG seed")->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads for independent tasks")
      ->capture_default_str();

  // ---- simulate -------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "draw a synthetic multi-population dataset");
  SimSpec spec;
  std::string sim_out = "sim";
  std::string founder_file;
  std::string preset;
  sim->add_option("--out", sim_out, "output path prefix")->capture_default_str();
  sim->add_option("--preset", preset, "conserved (theta 0.01) or diverse (theta 0.05)");
  sim->add_option("--populations", spec.populations)->capture_default_str();
  sim->add_option("--individuals", spec.individuals_per_pop)->capture_default_str();
  sim->add_option("--founders", spec.founders_per_pop)->capture_default_str();
  sim->add_option("--shared", spec.shared_founders)->capture_default_str();
  sim->add_option("--loci", spec.n_loci)->capture_default_str();
  sim->add_option("--theta", spec.theta)->capture_default_str();
  sim->add_option("--genotype-error", spec.genotype_error)->capture_default_str();
  sim->add_option("--alphabet", spec.alphabet_size)->capture_default_str();
  sim->add_option("--founder-file", founder_file, "use these founders instead of random ones");

  // ---- phase ---------------------------------------------------------------
  auto* ph = app.add_subcommand("phase", "reconstruct haplotypes from a genotype file");
  std::string ph_in, ph_out = "run";
  std::string model = "hdp", mode = "hierarchical";
  HDPConfig hdp_cfg;
  LigationConfig lig_cfg;
  bool use_pl = false;
  bool per_pop_tau = false;
  ph->add_option("--in", ph_in, "genotype file")->required();
  ph->add_option("--out", ph_out, "output path prefix")->capture_default_str();
  ph->add_option("--model", model, "dp or hdp")->capture_default_str();
  ph->add_option("--mode", mode, "pooled, per-population, or hierarchical")
      ->capture_default_str();
  ph->add_option("--burnin", hdp_cfg.burnin)->capture_default_str();
  ph->add_option("--samples", hdp_cfg.samples)->capture_default_str();
  ph->add_option("--init-tau", hdp_cfg.init_tau)->capture_default_str();
  ph->add_option("--init-gamma", hdp_cfg.init_gamma)->capture_default_str();
  ph->add_flag("--per-pop-tau", per_pop_tau, "separate tau per population urn");
  ph->add_flag("--pin-xi", hdp_cfg.pin_xi, "disable the genotyping noise channel");
  ph->add_flag("--fix-concentrations", [&](std::int64_t) {
    hdp_cfg.resample_concentrations = false;
  }, "keep gamma/tau at their initial values");
  ph->add_flag("--check-invariants", hdp_cfg.check_invariants,
               "audit all counts after every sweep (slow)");
  add_hyper_flags(ph, hdp_cfg.hp);
  ph->add_flag("--pl", use_pl, "partition-ligation pipeline for long sequences");
  ph->add_option("--block-length", lig_cfg.block_length)->capture_default_str();
  ph->add_option("--entropy-threshold", lig_cfg.entropy_threshold)->capture_default_str();
  ph->add_option("--lig-pseudocount", lig_cfg.dirichlet_pseudocount)->capture_default_str();
  ph->add_option("--lig-burnin", lig_cfg.gibbs_burnin)->capture_default_str();
  ph->add_option("--lig-samples", lig_cfg.gibbs_samples)->capture_default_str();
  ph->add_option("--max-expansion-bits", lig_cfg.max_expansion_bits)->capture_default_str();

  // ---- evaluate -------------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "score phased haplotypes against ground truth");
  std::string ev_pred, ev_truth, ev_out = "eval";
  double kl_filter = 0.05;
  ev->add_option("--pred", ev_pred, "phase output file")->required();
  ev->add_option("--truth", ev_truth, "truth sidecar file")->required();
  ev->add_option("--out", ev_out, "output path prefix")->capture_default_str();
  ev->add_option("--kl-filter", kl_filter, "frequency filter for the second KL report")
      ->capture_default_str();

  // ---- oracle-check ----------------------------------------------------------
  auto* oc = app.add_subcommand("oracle-check",
                                "compare the flat sampler against exact enumeration");
  std::string oc_file, oc_out;
  int oc_burnin = 2000, oc_sweeps = 50000;
  double oc_tv = 0.03;
  oc->add_option("--instance", oc_file, "oracle instance file")->required();
  oc->add_option("--out", oc_out, "optional report path");
  oc->add_option("--burnin", oc_burnin)->capture_default_str();
  oc->add_option("--sweeps", oc_sweeps)->capture_default_str();
  oc->add_option("--tv", oc_tv, "total-variation pass threshold")->capture_default_str();

  // ---- experiment ------------------------------------------------------------
  auto* ex = app.add_subcommand("experiment",
                                "paired multi-seed comparison of hdp vs dp mode-I/mode-II");
  ExperimentConfig exp_cfg;
  std::string ex_out = "experiment", ex_preset = "conserved";
  ex->add_option("--out", ex_out, "output path prefix")->capture_default_str();
  ex->add_option("--preset", ex_preset, "conserved or diverse")->capture_default_str();
  ex->add_option("--seeds", exp_cfg.n_seeds)->capture_default_str();
  ex->add_option("--burnin", exp_cfg.hdp.burnin)->capture_default_str();
  ex->add_option("--samples", exp_cfg.hdp.samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      spec.seed = common.seed;
      if (preset == "conserved")
        spec.theta = 0.01;
      else if (preset == "diverse")
        spec.theta = 0.05;
      else if (!preset.empty())
        throw InputError("unknown preset '" + preset + "'");
      return cmd_simulate(sim_out, spec, founder_file);
    }

    if (ph->parsed()) {
      const std::string input_bytes = read_file(ph_in);
      std::istringstream is(input_bytes);
      Dataset data = read_dataset(is, ph_in);
      {
        const auto v = validate_dataset(data);
        if (!v.empty())
          throw InputError(ph_in + ": " + v.front().what +
                           (v.front().individual.empty() ? "" : " (individual " +
                            v.front().individual + ")"));
      }
      hdp_cfg.seed = common.seed;
      hdp_cfg.shared_tau = !per_pop_tau;
      if (model != "dp" && model != "hdp") throw InputError("--model must be dp or hdp");
      if (mode != "pooled" && mode != "per-population" && mode != "hierarchical")
        throw InputError("--mode must be pooled, per-population or hierarchical");
      if (mode == "hierarchical" && model != "hdp")
        throw InputError("mode 'hierarchical' requires model 'hdp'");
      if (use_pl && (model != "hdp" || mode != "hierarchical"))
        throw InputError("--pl requires --model hdp --mode hierarchical");

      DPConfig dp_cfg;
      dp_cfg.hp = hdp_cfg.hp;
      dp_cfg.burnin = hdp_cfg.burnin;
      dp_cfg.samples = hdp_cfg.samples;
      dp_cfg.init_tau = hdp_cfg.init_tau;
      dp_cfg.resample_tau = hdp_cfg.resample_concentrations;
      dp_cfg.pin_xi = hdp_cfg.pin_xi;
      dp_cfg.check_invariants = hdp_cfg.check_invariants;

      PhasingResult result;
      if (use_pl) {
        result = phase_long(data, hdp_cfg, lig_cfg);
      } else if (mode == "hierarchical") {
        result = run_hdp(data, hdp_cfg);
      } else if (mode == "pooled") {
        const Dataset pooled = pool_populations(data);
        if (model == "hdp") {
          result = run_hdp(pooled, hdp_cfg);
        } else {
          dp_cfg.seed = common.seed;
          result = run_dp(pooled, dp_cfg);
        }
      } else {  // per-population
        std::vector<PhasingResult> parts(data.n_populations());
        parallel_for(data.n_populations(), common.threads, [&](int j) {
          const Dataset sub = single_population(data, j);
          if (model == "hdp") {
            HDPConfig c = hdp_cfg;
            c.seed = derive_seed(common.seed, 0x9900 + j);
            parts[j] = run_hdp(sub, c);
          } else {
            DPConfig c = dp_cfg;
            c.seed = derive_seed(common.seed, 0x9900 + j);
            parts[j] = run_dp(sub, c);
          }
        });
        result = merge_per_population(std::move(parts), data,
                                      model == "hdp" ? "hdp-mode2" : "dp-mode2");
        result.seed = common.seed;
      }

      std::vector<std::string> pop_ids;
      for (const auto& p : data.populations) pop_ids.push_back(p.id);
      write_phase_file(ph_out + ".phased.txt", result);
      write_file(ph_out + ".founders.txt", founder_report_to_string(result, pop_ids));
      write_file(ph_out + ".diag.txt", diagnostics_to_string(result));
      char digest[32];
      std::snprintf(digest, sizeof digest, "%016llx",
                    static_cast<unsigned long long>(fnv1a64(input_bytes)));
      write_manifest(ph_out + ".manifest",
                     {{"command", "phase"},
                      {"version", kVersion},
                      {"input", ph_in},
                      {"input_digest_fnv1a64", digest},
                      {"model", model},
                      {"mode", mode},
                      {"pl", use_pl ? "1" : "0"},
                      {"seed", std::to_string(common.seed)},
                      {"burnin", std::to_string(hdp_cfg.burnin)},
                      {"samples", std::to_string(hdp_cfg.samples)},
                      {"alpha_h", std::to_string(hdp_cfg.hp.alpha_h)},
                      {"beta_h", std::to_string(hdp_cfg.hp.beta_h)},
                      {"alpha_g", std::to_string(hdp_cfg.hp.alpha_g)},
                      {"beta_g", std::to_string(hdp_cfg.hp.beta_g)},
                      {"iota", std::to_string(hdp_cfg.hp.iota)},
                      {"kappa", std::to_string(hdp_cfg.hp.kappa)},
                      {"block_length", std::to_string(lig_cfg.block_length)}});
      std::cout << "phased " << data.total_individuals() << " individuals (K mode "
                << result.k_mode << "); wrote " << ph_out << ".phased.txt\n";
      return 0;
    }

    if (ev->parsed()) {
      std::vector<std::string> pops;
      const GroundTruth truth = read_truth_file(ev_truth, &pops);
      PhasingResult pred;
      pred.individuals = read_phase_file(ev_pred);
      const PhasingScore score = score_phasing(truth, pred);
      const double kl_all = kl_vs_truth(truth, pred, static_cast<int>(pops.size()), 0.0);
      const double kl_freq = kl_vs_truth(truth, pred, static_cast<int>(pops.size()), kl_filter);
      write_file(ev_out + ".scores.txt",
                 scores_kv_to_string(score, {{"kl_all", kl_all}, {"kl_frequent", kl_freq}}));
      write_file(ev_out + ".scores.csv", scores_csv_to_string(score));
      std::cout << "err_s " << score.err_s << ", d_w " << score.d_w_total << ", kl_all "
                << kl_all << "; wrote " << ev_out << ".scores.{txt,csv}\n";
      return 0;
    }

    if (oc->parsed()) {
      const OracleInstance inst = read_oracle_instance_file(oc_file);
      const ExactPosterior exact = exact_posterior(inst);
      const auto emp = [&] {
        // the flat sampler at fixed tau, matching the instance's channel
        DPConfig cfg;
        cfg.hp = inst.hp;
        cfg.init_tau = inst.tau;
        cfg.resample_tau = false;
        cfg.pin_xi = inst.pin_xi;
        cfg.seed = common.seed;
        SamplerState st = init_state(inst.data, inst.tau, 1.0, common.seed);
        Rng rng(derive_seed(common.seed, 1));
        std::vector<std::map<UnorderedPair, double>> dist(inst.data.total_individuals());
        for (int s = 0; s < oc_burnin + oc_sweeps; ++s) {
          dp_gibbs_sweep(st, inst.data, cfg, rng);
          if (s < oc_burnin) continue;
          for (size_t i = 0; i < dist.size(); ++i) {
            const Haplotype& a = st.haplotype[0][i][0];
            const Haplotype& b = st.haplotype[0][i][1];
            dist[i][a <= b ? UnorderedPair{a, b} : UnorderedPair{b, a}] += 1.0 / oc_sweeps;
          }
        }
        return dist;
      }();

      std::ostringstream report;
      report.precision(6);
      bool pass = true;
      for (size_t i = 0; i < emp.size(); ++i) {
        const double tv = phase_tv(exact.phase_marginals[i], emp[i]);
        const bool ok = tv <= oc_tv;
        pass = pass && ok;
        report << "individual " << inst.data.populations[0].individuals[i].id << " tv " << tv
               << (ok ? " pass" : " FAIL") << "\n";
      }
      report << (pass ? "RESULT pass" : "RESULT fail") << "\n";
      std::cout << report.str();
      if (!oc_out.empty()) write_file(oc_out, report.str());
      return pass ? 0 : 1;
    }

    if (ex->parsed()) {
      exp_cfg.base.seed = common.seed;
      exp_cfg.base.theta = ex_preset == "diverse" ? 0.05 : 0.01;
      if (ex_preset != "conserved" && ex_preset != "diverse")
        throw InputError("unknown preset '" + ex_preset + "'");
      exp_cfg.dp.burnin = exp_cfg.hdp.burnin;
      exp_cfg.dp.samples = exp_cfg.hdp.samples;
      exp_cfg.threads = common.threads;
      const auto rows = run_comparison(exp_cfg);
      const auto summary = summarize(rows);
      write_file(ex_out + ".rows.csv", rows_to_csv(rows));
      write_file(ex_out + ".summary.txt", summary_to_string(summary));
      std::cout << summary_to_string(summary);
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource bound exceeded: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
