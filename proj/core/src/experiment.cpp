#include "popphase/experiment.hpp"

#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

namespace popphase {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double kl_vs_truth(const GroundTruth& truth, const PhasingResult& pred, int n_populations,
                   double min_freq_filter) {
  std::map<std::string, const IndividualPhase*> by_id;
  for (const auto& p : pred.individuals) by_id[p.id] = &p;

  std::vector<std::vector<IndividualPhase>> grouped(n_populations);
  for (const auto& ti : truth.individuals) {
    auto it = by_id.find(ti.id);
    if (it == by_id.end()) throw InputError("result is missing individual " + ti.id);
    grouped[ti.pop].push_back(*it->second);
  }
  const auto truth_freqs = true_strand_frequencies(truth, n_populations);

  double sum = 0;
  int used = 0;
  for (int j = 0; j < n_populations; ++j) {
    if (grouped[j].empty()) continue;
    sum += freq_kl(truth_freqs[j], strand_frequencies(grouped[j]), min_freq_filter);
    ++used;
  }
  return used > 0 ? sum / used : 0.0;
}

std::vector<ComparisonRow> run_comparison(const ExperimentConfig& cfg) {
  std::vector<ComparisonRow> rows(cfg.n_seeds);
  parallel_for(cfg.n_seeds, cfg.threads, [&](int s) {
    SimSpec spec = cfg.base;
    spec.seed = derive_seed(cfg.base.seed, 0x5EED0000ull + s);
    spec.founder_pool = cfg.base.founder_pool;
    auto [data, truth] = generate(spec);
    const int J = data.n_populations();

    ComparisonRow row;
    row.seed = spec.seed;

    {
      HDPConfig hc = cfg.hdp;
      hc.seed = derive_seed(cfg.hdp.seed, 0xA0000ull + s);
      const PhasingResult res = run_hdp(data, hc);
      const PhasingScore sc = score_phasing(truth, res);
      row.err_hdp = sc.err_s;
      row.dw_hdp = sc.d_w_total;
      row.k_hdp = res.k_mode;
      double pk = 0;
      for (double v : res.pop_k_mean) pk += v;
      row.pop_k_mean_hdp = res.pop_k_mean.empty() ? 0 : pk / res.pop_k_mean.size();
      row.theta_hdp = res.theta_hat;
      row.kl_hdp = kl_vs_truth(truth, res, J, 0.0);
    }

    if (cfg.run_dp_modes) {
      {
        DPConfig dc = cfg.dp;
        dc.seed = derive_seed(cfg.dp.seed, 0xB0000ull + s);
        const PhasingResult res = run_dp(pool_populations(data), dc);
        const PhasingScore sc = score_phasing(truth, res);
        row.err_dp1 = sc.err_s;
        row.dw_dp1 = sc.d_w_total;
        row.k_dp1 = res.k_mode;
        row.kl_dp1 = kl_vs_truth(truth, res, J, 0.0);
      }
      {
        PhasingResult merged;
        merged.model = "dp-mode2";
        merged.alphabet = data.alphabet;
        for (int j = 0; j < J; ++j) {
          DPConfig dc = cfg.dp;
          dc.seed = derive_seed(cfg.dp.seed, 0xC0000ull + s * 64ull + j);
          const PhasingResult res = run_dp(single_population(data, j), dc);
          for (const auto& p : res.individuals) merged.individuals.push_back(p);
        }
        const PhasingScore sc = score_phasing(truth, merged);
        row.err_dp2 = sc.err_s;
        row.dw_dp2 = sc.d_w_total;
        row.kl_dp2 = kl_vs_truth(truth, merged, J, 0.0);
      }
    }

    rows[s] = row;
  });
  return rows;
}

ExperimentSummary summarize(const std::vector<ComparisonRow>& rows) {
  ExperimentSummary s;
  if (rows.empty()) return s;
  const double n = static_cast<double>(rows.size());
  int err_w1 = 0, err_l1 = 0, err_w2 = 0, err_l2 = 0;
  int kl_w1 = 0, kl_l1 = 0, kl_w2 = 0, kl_l2 = 0;
  for (const auto& r : rows) {
    s.mean_err_hdp += r.err_hdp / n;
    s.mean_err_dp1 += r.err_dp1 / n;
    s.mean_err_dp2 += r.err_dp2 / n;
    s.mean_k_hdp += r.k_hdp / n;
    s.mean_k_dp1 += r.k_dp1 / n;
    s.mean_pop_k_hdp += r.pop_k_mean_hdp / n;
    s.mean_theta_hdp += r.theta_hdp / n;
    s.mean_kl_hdp += r.kl_hdp / n;
    s.mean_kl_dp1 += r.kl_dp1 / n;
    s.mean_kl_dp2 += r.kl_dp2 / n;
    if (r.err_hdp < r.err_dp1) ++err_w1;
    if (r.err_hdp > r.err_dp1) ++err_l1;
    if (r.err_hdp < r.err_dp2) ++err_w2;
    if (r.err_hdp > r.err_dp2) ++err_l2;
    if (r.kl_hdp < r.kl_dp1) ++kl_w1;
    if (r.kl_hdp > r.kl_dp1) ++kl_l1;
    if (r.kl_hdp < r.kl_dp2) ++kl_w2;
    if (r.kl_hdp > r.kl_dp2) ++kl_l2;
  }
  s.p_err_vs_dp1 = sign_test_p(err_w1, err_l1);
  s.p_err_vs_dp2 = sign_test_p(err_w2, err_l2);
  s.p_kl_vs_dp1 = sign_test_p(kl_w1, kl_l1);
  s.p_kl_vs_dp2 = sign_test_p(kl_w2, kl_l2);
  return s;
}

std::string rows_to_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "seed,err_hdp,err_dp1,err_dp2,dw_hdp,dw_dp1,dw_dp2,k_hdp,k_dp1,pop_k_mean_hdp,"
        "kl_hdp,kl_dp1,kl_dp2,theta_hdp\n";
  for (const auto& r : rows)
    os << r.seed << "," << r.err_hdp << "," << r.err_dp1 << "," << r.err_dp2 << "," << r.dw_hdp
       << "," << r.dw_dp1 << "," << r.dw_dp2 << "," << r.k_hdp << "," << r.k_dp1 << ","
       << r.pop_k_mean_hdp << "," << r.kl_hdp << "," << r.kl_dp1 << "," << r.kl_dp2 << ","
       << r.theta_hdp << "\n";
  return os.str();
}

std::string summary_to_string(const ExperimentSummary& s) {
  std::ostringstream os;
  os.precision(10);
  os << "mean_err_hdp = " << s.mean_err_hdp << "\n";
  os << "mean_err_dp1 = " << s.mean_err_dp1 << "\n";
  os << "mean_err_dp2 = " << s.mean_err_dp2 << "\n";
  os << "mean_k_hdp = " << s.mean_k_hdp << "\n";
  os << "mean_k_dp1 = " << s.mean_k_dp1 << "\n";
  os << "mean_pop_k_hdp = " << s.mean_pop_k_hdp << "\n";
  os << "mean_theta_hdp = " << s.mean_theta_hdp << "\n";
  os << "mean_kl_hdp = " << s.mean_kl_hdp << "\n";
  os << "mean_kl_dp1 = " << s.mean_kl_dp1 << "\n";
  os << "mean_kl_dp2 = " << s.mean_kl_dp2 << "\n";
  os << "p_err_vs_dp1 = " << s.p_err_vs_dp1 << "\n";
  os << "p_err_vs_dp2 = " << s.p_err_vs_dp2 << "\n";
  os << "p_kl_vs_dp1 = " << s.p_kl_vs_dp1 << "\n";
  os << "p_kl_vs_dp2 = " << s.p_kl_vs_dp2 << "\n";
  return os.str();
}

}  // namespace popphase
