#ifndef POPPHASE_IO_HPP
#define POPPHASE_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "popphase/eval.hpp"
#include "popphase/exact_oracle.hpp"
#include "popphase/result.hpp"
#include "popphase/synthgen.hpp"
#include "popphase/types.hpp"

namespace popphase {

// ---- dataset text format ----------------------------------------------------
// header  : "#loci <T>" and, for non-biallelic data, "#alphabet <n>"
// records : "<individual_id> <population_id> <g_1> ... <g_T>"
// biallelic site tokens 0|1|2|? (hom-0, het, hom-1, missing); general
// alphabets use "a/b" pairs and "?".

Dataset read_dataset(std::istream& in, const std::string& source_name);
Dataset read_dataset_file(const std::string& path);
std::string dataset_to_string(const Dataset& d);
void write_dataset_file(const std::string& path, const Dataset& d);

// ---- ground-truth sidecar ----------------------------------------------------
std::string truth_to_string(const GroundTruth& t, const Dataset& data);
void write_truth_file(const std::string& path, const GroundTruth& t, const Dataset& data);
GroundTruth read_truth_file(const std::string& path, std::vector<std::string>* pop_ids = nullptr);

// ---- phased haplotypes ---------------------------------------------------
// two lines per individual: "<individual_id> <population_id> <e> <alleles>"
std::string phase_to_string(const PhasingResult& r);
void write_phase_file(const std::string& path, const PhasingResult& r);
std::vector<IndividualPhase> read_phase_file(const std::string& path);

// ---- founder report / diagnostics ----------------------------------------
std::string founder_report_to_string(const PhasingResult& r,
                                     const std::vector<std::string>& pop_ids);
std::string diagnostics_to_string(const PhasingResult& r);

// ---- scores ---------------------------------------------------------------
std::string scores_kv_to_string(const PhasingScore& s,
                                const std::vector<std::pair<std::string, double>>& extras);
std::string scores_csv_to_string(const PhasingScore& s);

// ---- oracle instance -------------------------------------------------------
// dataset grammar plus "#tau", "#kmax", "#pin_xi", "#alpha_h", "#beta_h",
// "#alpha_g", "#beta_g" headers
OracleInstance read_oracle_instance_file(const std::string& path);

// ---- misc -------------------------------------------------------------------
std::string hap_to_string(const Haplotype& h);
Haplotype parse_hap(const std::string& s, int n_loci, const AlleleAlphabet& alphabet);

std::uint64_t fnv1a64(std::string_view bytes);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace popphase

#endif  // POPPHASE_IO_HPP
