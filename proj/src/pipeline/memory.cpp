#include <string>

#include "qsurr/pipeline.hpp"

namespace qsurr::pipeline {

namespace {

struct PublishedLimit {
  Tier tier;
  int n_layers;
  int low;
  int high;
};

// Qubit limits as commonly quoted for the three device classes (ranges kept as low/high).
constexpr PublishedLimit kPublished[] = {
    {Tier::Laptop, 1, 6, 7},      {Tier::Laptop, 2, 4, 4},      {Tier::Laptop, 3, 2, 3},
    {Tier::Workstation, 1, 13, 13}, {Tier::Workstation, 2, 7, 7}, {Tier::Workstation, 3, 5, 5},
    {Tier::Hpc, 1, 26, 26},       {Tier::Hpc, 2, 13, 13},       {Tier::Hpc, 3, 8, 9},
};

double tier_bytes(Tier t) {
  switch (t) {
    case Tier::Laptop: return kLaptopBytes;
    case Tier::Workstation: return kWorkstationBytes;
    case Tier::Hpc: return kHpcBytes;
    default: return 0.0;
  }
}

BigInt to_big(double v) { return BigInt(static_cast<unsigned long long>(v)); }

}  // namespace

ResourceEstimate estimate_memory(const CircuitConfig& cfg, int bytes_per_entry) {
  if (bytes_per_entry <= 0) throw PreconditionError("bytes_per_entry must be positive");
  const auto desc = spectrum::omega_max_of(cfg);
  ResourceEstimate e;
  e.lattice_size = spectrum::lattice_size(desc);
  e.grid_size = e.lattice_size;  // T_i = 2 omega_max(i) + 1 points per feature
  e.bytes_per_entry = bytes_per_entry;
  e.design_matrix_bytes = e.grid_size * e.lattice_size * bytes_per_entry;
  e.feasible_on = classify(e.design_matrix_bytes);
  return e;
}

Tier classify(const BigInt& bytes) {
  if (bytes <= to_big(kLaptopBytes)) return Tier::Laptop;
  if (bytes <= to_big(kWorkstationBytes)) return Tier::Workstation;
  if (bytes <= to_big(kHpcBytes)) return Tier::Hpc;
  return Tier::Infeasible;
}

std::string to_string(Tier t) {
  switch (t) {
    case Tier::Laptop: return "laptop";
    case Tier::Workstation: return "workstation";
    case Tier::Hpc: return "hpc";
    case Tier::Infeasible: return "infeasible";
  }
  return "unknown";
}

int max_qubits_within(double bytes, int n_layers, int bytes_per_entry) {
  if (n_layers < 1) throw PreconditionError("n_layers must be positive");
  const BigInt limit = to_big(bytes);
  const BigInt per_qubit = BigInt(2 * n_layers + 1) * (2 * n_layers + 1);
  BigInt cost = bytes_per_entry;
  int n = 0;
  while (cost * per_qubit <= limit) {
    cost *= per_qubit;
    ++n;
  }
  return n;
}

nlohmann::json table_discrepancy_report(int bytes_per_entry) {
  nlohmann::json rows = nlohmann::json::array();
  int mismatches = 0;
  for (const auto& p : kPublished) {
    const int formula = max_qubits_within(tier_bytes(p.tier), p.n_layers, bytes_per_entry);
    const bool agrees = formula >= p.low && formula <= p.high;
    if (!agrees) ++mismatches;
    rows.push_back({{"tier", to_string(p.tier)},
                    {"ram_bytes", tier_bytes(p.tier)},
                    {"n_layers", p.n_layers},
                    {"published_qubits", p.low == p.high ? std::to_string(p.low)
                                                         : std::to_string(p.low) + "-" +
                                                               std::to_string(p.high)},
                    {"formula_qubits", formula},
                    {"agrees", agrees}});
  }
  return {{"formula", "|T| * |Omega| * bytes_per_entry, one feature per qubit"},
          {"bytes_per_entry", bytes_per_entry},
          {"rows", std::move(rows)},
          {"mismatches", mismatches},
          {"note",
           "the published qubit limits are not reproduced by the dense design-matrix "
           "formula; the estimator keeps the formula and reports the gap"}};
}

void to_json(nlohmann::json& j, const ResourceEstimate& e) {
  j = nlohmann::json{{"grid_size", e.grid_size.str()},
                     {"lattice_size", e.lattice_size.str()},
                     {"design_matrix_bytes", e.design_matrix_bytes.str()},
                     {"bytes_per_entry", e.bytes_per_entry},
                     {"feasible_on", to_string(e.feasible_on)},
                     {"tier_thresholds_bytes",
                      {{"laptop", kLaptopBytes},
                       {"workstation", kWorkstationBytes},
                       {"hpc", kHpcBytes}}}};
}

}  // namespace qsurr::pipeline
