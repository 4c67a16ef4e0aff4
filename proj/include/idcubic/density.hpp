#pragma once

// Sampling experiment: how often certify decides rank-r matrices.

#include <chrono>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "idcubic/certifier.hpp"
#include "idcubic/forge.hpp"

namespace idc {

struct DensityRow {
  std::uint64_t seed = 0;
  std::size_t m = 0, r = 0;
  Verdict verdict = Verdict::Undecided;
  std::string reason;
  double millis = 0;
};

struct DensitySummary {
  std::size_t m = 0, r = 0, trials = 0;
  std::uint64_t seed = 0;
  std::int64_t box = 3;
  std::vector<DensityRow> rows;
  std::size_t proper = 0, nonproper = 0, undecided = 0;
  std::map<std::string, std::size_t> reasons;
};

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t i) { return splitmix64(seed + i); }

inline DensitySummary density_experiment(std::size_t m, std::size_t r, std::size_t trials, std::uint64_t seed,
                                         std::int64_t box = 3) {
  if (trials == 0) throw DomainError("trials must be >= 1");
  if (r > m) throw DomainError("rank r exceeds m");
  DensitySummary s;
  s.m = m;
  s.r = r;
  s.trials = trials;
  s.seed = seed;
  s.box = box;
  for (std::size_t i = 0; i < trials; ++i) {
    DensityRow row;
    row.seed = trial_seed(seed, i);
    row.m = m;
    row.r = r;
    const RatMatrix a = sample_rank_r(m, r, box, row.seed);
    CertifyOptions opt;
    opt.seed = row.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const Certificate c = certify(a, opt);
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    row.verdict = c.verdict;
    row.reason = c.reason.empty() ? "-" : c.reason;
    switch (c.verdict) {
      case Verdict::Proper: ++s.proper; break;
      case Verdict::NonProper: ++s.nonproper; break;
      case Verdict::Undecided: ++s.undecided; break;
    }
    ++s.reasons[row.reason];
    s.rows.push_back(std::move(row));
  }
  return s;
}

// timing = false writes NA for millis so output is reproducible.
inline void write_density_csv(std::ostream& os, const DensitySummary& s, bool timing = true) {
  os << "seed,m,r,verdict,reason,millis\n";
  for (const auto& row : s.rows) {
    os << row.seed << ',' << row.m << ',' << row.r << ',' << to_string(row.verdict) << ',' << row.reason << ',';
    if (timing) {
      std::ostringstream ms;
      ms.setf(std::ios::fixed);
      ms.precision(3);
      ms << row.millis;
      os << ms.str();
    } else {
      os << "NA";
    }
    os << '\n';
  }
}

inline std::string density_table(const DensitySummary& s) {
  std::ostringstream os;
  os << "m=" << s.m << " r=" << s.r << " trials=" << s.trials << " seed=" << s.seed << '\n';
  os << "Proper " << s.proper << "\nNonProper " << s.nonproper << "\nUndecided " << s.undecided << '\n';
  for (const auto& [reason, n] : s.reasons) os << "  " << reason << ' ' << n << '\n';
  return os.str();
}

}  // namespace idc
