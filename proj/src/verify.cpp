#include "fixpoint/verify.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "fixpoint/errors.hpp"
#include "fixpoint/instance.hpp"

namespace fixpoint {

std::string ViolationReport::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case Kind::Lipschitz: j["kind"] = "lipschitz"; break;
    case Kind::TranscriptConsistency: j["kind"] = "transcript_consistency"; break;
    case Kind::Residual: j["kind"] = "residual"; break;
    case Kind::RangeBox: j["kind"] = "range_box"; break;
  }
  auto reals = [](const Point& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : p) arr.push_back(format_real(v));
    return arr;
  };
  j["witness_a"] = reals(witness_a);
  j["witness_b"] = reals(witness_b);
  j["round_a"] = round_a;
  j["round_b"] = round_b;
  j["measured"] = format_real(measured);
  j["required"] = format_real(required);
  j["detail"] = detail;
  return j.dump();
}

BanachOutcome banach_iterate(const MapFn& f, double eps, double gamma,
                             const Point& x0, NormKind norm) {
  if (eps <= 0.0 || gamma <= 0.0 || gamma > 1.0) {
    throw ContractViolation("banach_iterate: need eps > 0 and gamma in (0,1]");
  }
  const int k = static_cast<int>(x0.size());
  const double diam = norm == NormKind::L1 ? static_cast<double>(k) : 1.0;
  long cap = 2;
  if (diam > eps) {
    cap += static_cast<long>(std::ceil(std::log(diam / eps) / -std::log1p(-gamma)));
  }
  BanachOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  Point x = x0;
  for (long it = 0; it < cap; ++it) {
    Point fx = f(x);
    out.result.transcript.add(x, fx);
    ++out.result.stats.rounds;
    if (norm_distance(fx, x, norm) <= eps + kSlack) {
      out.result.answer = x;
      out.result.stats.queries = out.result.transcript.size();
      out.result.stats.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return out;
    }
    x = std::move(fx);
  }
  out.result.answer = x;
  out.result.stats.queries = out.result.transcript.size();
  out.result.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ViolationReport report;
  report.kind = ViolationReport::Kind::Lipschitz;
  report.witness_a = x0;
  report.witness_b = x;
  report.measured = static_cast<double>(cap);
  report.required = static_cast<double>(cap);
  report.detail = "value iteration exceeded the geometric-convergence cap";
  out.violation = report;
  return out;
}

Point grid_search_fixed_point(const MapFn& f, double eps, int k, NormKind norm) {
  if (k < 1 || k > 3) {
    throw ContractViolation("grid_search_fixed_point: k must be in [1,3]");
  }
  if (eps <= 0.0 || 1.0 / eps > 4096.0) {
    throw ContractViolation("grid_search_fixed_point: need 1/eps <= 4096");
  }
  const double delta = norm == NormKind::LInf ? eps / 4.0 : eps / (4.0 * k);
  const long n = static_cast<long>(std::ceil(1.0 / delta)) + 1;  // points per axis
  const double step = 1.0 / static_cast<double>(n - 1);

  Point best;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<long> idx(k, 0);
  Point x(k, 0.0);
  while (true) {
    for (int i = 0; i < k; ++i) x[i] = std::min(1.0, idx[i] * step);
    double r = norm_distance(f(x), x, norm);
    if (r < best_residual) {
      best_residual = r;
      best = x;
    }
    int i = 0;
    while (i < k && ++idx[i] == n) {
      idx[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return best;
}

std::optional<ViolationReport> check_nonexpansive_pairs(const MapFn& f, int k,
                                                        int n_pairs, NormKind norm,
                                                        double required_L,
                                                        std::uint64_t seed) {
  if (n_pairs < 1) throw ContractViolation("check_nonexpansive_pairs: n_pairs >= 1");
  Rng rng(seed);
  auto test_pair = [&](const Point& x, const Point& y) -> std::optional<ViolationReport> {
    double dx = norm_distance(x, y, norm);
    double dfx = norm_distance(f(x), f(y), norm);
    if (dfx > required_L * dx + kSlack) {
      ViolationReport report;
      report.kind = ViolationReport::Kind::Lipschitz;
      report.witness_a = x;
      report.witness_b = y;
      report.measured = dfx;
      report.required = required_L * dx;
      report.detail = "sampled pair violates the certified Lipschitz bound";
      return report;
    }
    return std::nullopt;
  };

  auto random_point = [&](bool boundary) {
    Point p(k);
    for (auto& v : p) v = rng.uniform();
    if (boundary) {
      int i = static_cast<int>(rng.next() % k);
      p[i] = rng.next() % 2 == 0 ? 0.0 : 1.0;
    }
    return p;
  };

  for (int t = 0; t < n_pairs; ++t) {
    Point x = random_point(t % 5 == 3);
    Point y;
    if (t % 5 == 4) {  // axis-aligned pair
      y = x;
      int i = static_cast<int>(rng.next() % k);
      y[i] = rng.uniform();
    } else {
      y = random_point(t % 5 == 3);
    }
    if (auto v = test_pair(x, y)) return v;
  }
  return std::nullopt;
}

std::optional<ViolationReport> check_transcript_consistency(const Transcript& transcript) {
  const auto& rec = transcript.records;
  for (size_t r = 0; r < rec.size(); ++r) {
    for (size_t t = r + 1; t < rec.size(); ++t) {
      double dv = norm_distance(rec[r].answer, rec[t].answer, NormKind::LInf);
      double dq = norm_distance(rec[r].query, rec[t].query, NormKind::LInf);
      if (dv > dq + kSlack) {
        ViolationReport report;
        report.kind = ViolationReport::Kind::TranscriptConsistency;
        report.witness_a = rec[r].answer;
        report.witness_b = rec[t].answer;
        report.round_a = rec[r].round;
        report.round_b = rec[t].round;
        report.measured = dv;
        report.required = dq;
        report.detail = "outer answers are farther apart than their queries";
        return report;
      }
    }
  }
  return std::nullopt;
}

}  // namespace fixpoint
