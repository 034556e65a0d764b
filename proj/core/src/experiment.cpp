#include "ikwsms/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <string>

#include "ikwsms/errors.hpp"
#include "ikwsms/io.hpp"
#include "ikwsms/parallel.hpp"

namespace ikwsms {

std::string_view mode_name(ExperimentMode mode) {
  return mode == ExperimentMode::size ? "size" : "power";
}

ExperimentMode parse_mode(std::string_view name) {
  if (name == "size") return ExperimentMode::size;
  if (name == "power") return ExperimentMode::power;
  throw UsageError("unknown mode '" + std::string(name) + "'; valid modes: size, power");
}

Restriction ExperimentSpec::resolved_hypothesis() const {
  if (hypothesis) return *hypothesis;
  return Restriction::component(0, mode == ExperimentMode::size ? dgp.beta_true : 0.0);
}

void ExperimentSpec::validate() const {
  dgp.validate();
  if (replications < 1) throw UsageError("replications must be at least 1");
  if (alphas.empty() || multipliers.empty()) {
    throw UsageError("experiment needs at least one alpha and one multiplier");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw UsageError("alphas must lie in (0, 1)");
  }
  for (double m : multipliers) {
    if (!(m > 0.0 && m <= 1.0)) throw UsageError("multipliers must lie in (0, 1]");
  }
  // The simulated model has a single coefficient on x_tilde.
  resolved_hypothesis().validate(1);
}

std::vector<ReplicationDraw> run_replication(const ExperimentSpec& spec, int replication) {
  const auto m = static_cast<std::uint64_t>(replication);
  std::vector<ReplicationDraw> draws(spec.multipliers.size());
  const Restriction hypothesis = spec.resolved_hypothesis();
  const bool t_test = hypothesis.kind() == Restriction::Kind::component;

  EstimatorConfig config = spec.estimator;
  config.threads = 1;
  try {
    RandomStream data_stream(spec.master_seed, m, StreamTag::data);
    const Dataset data = generate_dataset(spec.dgp, data_stream);
    RandomStream boot_stream(spec.master_seed, m, StreamTag::bootstrap);
    const Dataset resample = bootstrap_resample(data, boot_stream);
    const Bandwidths selected = select_bandwidths(data, config).bandwidths;

    for (std::size_t k = 0; k < spec.multipliers.size(); ++k) {
      try {
        Bandwidths bw = selected;
        bw.multiplier = spec.multipliers[k];
        const EstimationResult original = estimate(data, config, bw);
        const EstimationResult replicate = estimate(resample, config, bw);
        ReplicationDraw draw;
        if (t_test) {
          draw.statistic = std::abs(t_statistic(original, hypothesis.index(), hypothesis.value()));
          draw.bootstrap_statistic = std::abs(bootstrap_t(original, replicate, hypothesis.index()));
        } else {
          draw.statistic = wald_statistic(original, hypothesis);
          draw.bootstrap_statistic = bootstrap_wald(original, replicate, hypothesis);
        }
        draw.ok = std::isfinite(draw.statistic) && std::isfinite(draw.bootstrap_statistic);
        draws[k] = draw;
      } catch (const Error&) {
        draws[k] = ReplicationDraw{};
      }
    }
  } catch (const Error&) {
    std::fill(draws.begin(), draws.end(), ReplicationDraw{});
  }
  return draws;
}

RejectionTable tabulate(const ExperimentSpec& spec,
                        const std::vector<std::vector<ReplicationDraw>>& draws) {
  const Restriction hypothesis = spec.resolved_hypothesis();
  const TestKind kind =
      hypothesis.kind() == Restriction::Kind::component ? TestKind::t : TestKind::wald;

  RejectionTable table;
  table.replications = spec.replications;

  struct Cell {
    std::vector<double> stats;
    std::vector<double> boot;
  };
  std::vector<Cell> cells(spec.multipliers.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (const auto& d : draws[k]) {
      if (!d.ok) continue;
      cells[k].stats.push_back(d.statistic);
      cells[k].boot.push_back(d.bootstrap_statistic);
    }
    const int failures = spec.replications - static_cast<int>(cells[k].stats.size());
    table.failures += failures;
    if (failures > spec.max_failure_fraction * spec.replications || cells[k].stats.empty()) {
      throw ReplicationFailureError(std::to_string(failures) + " of " +
                                    std::to_string(spec.replications) +
                                    " replications failed at multiplier " +
                                    io::format_double(spec.multipliers[k]));
    }
  }

  for (double alpha : spec.alphas) {
    const double acv = asymptotic_critical_value(kind, alpha, hypothesis.rows());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      RejectionRow row;
      row.mode = spec.mode;
      row.design = spec.dgp.design;
      row.n = spec.dgp.n;
      row.alpha = alpha;
      row.multiplier = spec.multipliers[k];
      row.replications = spec.replications;
      row.effective = static_cast<int>(cells[k].stats.size());
      row.failures = spec.replications - row.effective;
      row.acv = acv;
      row.bcv = bootstrap_critical_value(cells[k].boot, alpha);
      for (double s : cells[k].stats) {
        if (s > row.acv) ++row.acv_rejections;
        if (s > row.bcv) ++row.bcv_rejections;
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

RejectionTable run_experiment(const ExperimentSpec& spec, const ProgressCallback& progress) {
  spec.validate();
  const auto reps = static_cast<std::size_t>(spec.replications);
  std::vector<std::vector<ReplicationDraw>> draws(spec.multipliers.size(),
                                                  std::vector<ReplicationDraw>(reps));
  std::mutex progress_mutex;
  int done = 0;
  parallel_for(reps, spec.threads, [&](std::size_t m) {
    const auto per_multiplier = run_replication(spec, static_cast<int>(m));
    for (std::size_t k = 0; k < per_multiplier.size(); ++k) draws[k][m] = per_multiplier[k];
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, spec.replications);
    }
  });
  return tabulate(spec, draws);
}

namespace {

constexpr const char* kCsvHeader =
    "mode,design,n,alpha,multiplier,replications,effective,failures,acv_rejections,"
    "bcv_rejections,acv_rate,bcv_rate,acv,bcv";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string multiplier_label(double m) {
  return m == 1.0 ? "h" : io::format_double(m) + "h";
}

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string emit_csv(const RejectionTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : table.rows) {
    out += std::string(mode_name(r.mode)) + ',' + std::string(design_name(r.design)) + ',' +
           std::to_string(r.n) + ',' + io::format_double(r.alpha) + ',' +
           io::format_double(r.multiplier) + ',' + std::to_string(r.replications) + ',' +
           std::to_string(r.effective) + ',' + std::to_string(r.failures) + ',' +
           std::to_string(r.acv_rejections) + ',' + std::to_string(r.bcv_rejections) + ',' +
           io::format_double(r.acv_rate()) + ',' + io::format_double(r.bcv_rate()) + ',' +
           io::format_double(r.acv) + ',' + io::format_double(r.bcv) + '\n';
  }
  return out;
}

RejectionTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("rejection table CSV has an unexpected header", 0);
  }
  RejectionTable table;
  long row_number = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 14) throw ParseError("rejection table row has wrong field count", row_number);
    try {
      RejectionRow r;
      r.mode = parse_mode(f[0]);
      r.design = parse_design(f[1]);
      r.n = std::stoul(f[2]);
      r.alpha = std::stod(f[3]);
      r.multiplier = std::stod(f[4]);
      r.replications = std::stoi(f[5]);
      r.effective = std::stoi(f[6]);
      r.failures = std::stoi(f[7]);
      r.acv_rejections = std::stoi(f[8]);
      r.bcv_rejections = std::stoi(f[9]);
      r.acv = std::stod(f[12]);
      r.bcv = std::stod(f[13]);
      table.replications = std::max(table.replications, r.replications);
      table.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError("malformed rejection table row", row_number);
    }
  }
  return table;
}

std::string emit_text(const RejectionTable& table, TableLayout layout) {
  std::ostringstream out;
  if (layout == TableLayout::size) {
    std::vector<double> mults;
    for (const auto& r : table.rows) {
      if (std::find(mults.begin(), mults.end(), r.multiplier) == mults.end()) {
        mults.push_back(r.multiplier);
      }
    }
    std::sort(mults.rbegin(), mults.rend());

    out << "Empirical sizes (ACV = asymptotic, BCV = bootstrap critical values)\n";
    std::string head1 = pad("", 7, true) + pad("", 7);
    std::string head2 = pad("Model", 7, true) + pad("alpha", 7);
    for (double m : mults) {
      head1 += pad(multiplier_label(m), 16);
      head2 += pad("ACV", 8) + pad("BCV", 8);
    }
    out << head1 << '\n' << head2 << '\n';

    // Group rows by (design, n), keep alpha order of first appearance.
    std::vector<std::pair<Design, std::size_t>> groups;
    for (const auto& r : table.rows) {
      const auto key = std::make_pair(r.design, r.n);
      if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [design, n] : groups) {
      std::vector<double> alphas;
      for (const auto& r : table.rows) {
        if (r.design == design && r.n == n &&
            std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) {
          alphas.push_back(r.alpha);
        }
      }
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        std::string line = pad(a == 0 ? std::string(design_name(design)) : "", 7, true) +
                           pad(fixed3(alphas[a]).substr(0, 4), 7);
        for (double m : mults) {
          auto it = std::find_if(table.rows.begin(), table.rows.end(), [&](const RejectionRow& r) {
            return r.design == design && r.n == n && r.alpha == alphas[a] && r.multiplier == m;
          });
          line += it == table.rows.end()
                      ? pad("-", 8) + pad("-", 8)
                      : pad(fixed3(it->acv_rate()), 8) + pad(fixed3(it->bcv_rate()), 8);
        }
        out << line << '\n';
      }
    }
    return out.str();
  }

  std::vector<double> alphas;
  for (const auto& r : table.rows) {
    if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) alphas.push_back(r.alpha);
  }
  std::sort(alphas.rbegin(), alphas.rend());
  out << "Empirical powers (ACV = asymptotic, BCV = bootstrap critical values)\n";
  std::string head1 = pad("", 7, true) + pad("", 7) + pad("", 7);
  std::string head2 = pad("Model", 7, true) + pad("n", 7) + pad("mult", 7);
  for (double a : alphas) {
    head1 += pad("alpha=" + io::format_double(a), 16);
    head2 += pad("ACV", 8) + pad("BCV", 8);
  }
  out << head1 << '\n' << head2 << '\n';

  std::vector<std::tuple<Design, std::size_t, double>> groups;
  for (const auto& r : table.rows) {
    const auto key = std::make_tuple(r.design, r.n, r.multiplier);
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  std::sort(groups.begin(), groups.end());
  Design last_design{};
  bool first = true;
  for (const auto& [design, n, m] : groups) {
    std::string line = pad(first || design != last_design ? std::string(design_name(design)) : "",
                           7, true) +
                       pad(std::to_string(n), 7) + pad(io::format_double(m), 7);
    first = false;
    last_design = design;
    for (double a : alphas) {
      auto it = std::find_if(table.rows.begin(), table.rows.end(), [&](const RejectionRow& r) {
        return r.design == design && r.n == n && r.multiplier == m && r.alpha == a;
      });
      line += it == table.rows.end()
                  ? pad("-", 8) + pad("-", 8)
                  : pad(fixed3(it->acv_rate()), 8) + pad(fixed3(it->bcv_rate()), 8);
    }
    out << line << '\n';
  }
  return out.str();
}

std::string csv_file_name(ExperimentMode mode, Design design, std::size_t n) {
  return std::string(mode_name(mode)) + "_" + std::string(design_name(design)) + "_n" +
         std::to_string(n) + ".csv";
}

}  // namespace ikwsms
