#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sel/core/csv.hpp"
#include "sel/core/error.hpp"
#include "sel/estimate/calendar.hpp"

namespace sel::estimate {

struct MatchRecord {
  Date date;
  std::string home_team;
  std::string away_team;
  unsigned home_goals = 0;
  unsigned away_goals = 0;
};

/// Fitted log-linear Poisson strengths:
/// log(lambda_i) = intercept + (r_i - r_j) + home_effect * 1(i at home).
struct StrengthTable {
  std::map<std::string, double> strengths;  // sums to zero
  double intercept = 0.0;
  double home_effect = 0.0;
  Date reference_date;
  double half_life_days = 500.0;
  std::size_t iterations = 0;

  double strength(const std::string& team) const {
    const auto it = strengths.find(team);
    if (it == strengths.end()) fail(ErrorCode::UnknownTeam, "team '" + team + "' was not in the fit");
    return it->second;
  }

  /// Expected goals of `team` against `opponent`.
  double expected_goals(const std::string& team, const std::string& opponent, bool at_home) const {
    return std::exp(intercept + strength(team) - strength(opponent) + (at_home ? home_effect : 0.0));
  }
};

/// Exponential half-life decay: 1 on the reference date, 0.5 one half-life earlier.
inline double recency_weight(Date match_date, Date reference_date, double half_life_days) {
  if (!(half_life_days > 0.0)) fail(ErrorCode::InvalidArgument, "half-life must be positive");
  if (match_date > reference_date)
    fail(ErrorCode::FutureMatch, "match on " + match_date.to_string() + " is after the reference date " +
                                     reference_date.to_string());
  return std::pow(0.5, static_cast<double>(reference_date - match_date) / half_life_days);
}

namespace detail {

inline std::vector<std::string> collect_teams(const std::vector<MatchRecord>& matches) {
  std::vector<std::string> teams;
  for (const auto& m : matches) {
    if (m.home_team == m.away_team) fail(ErrorCode::InvalidArgument, "team '" + m.home_team + "' plays itself");
    teams.push_back(m.home_team);
    teams.push_back(m.away_team);
  }
  std::sort(teams.begin(), teams.end());
  teams.erase(std::unique(teams.begin(), teams.end()), teams.end());
  return teams;
}

inline bool schedule_connected(std::size_t n_teams, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::size_t> parent(n_teams);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n_teams;
  for (auto [a, b] : edges) {
    const auto ra = root(a), rb = root(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

}  // namespace detail

struct StrengthFitOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-8;
};

/// Recency-weighted double-Poisson maximum likelihood by IRLS.
///
/// Every match yields two observations: home goals with log-mean
/// b0 + (r_home - r_away) + h and away goals with log-mean b0 + (r_away - r_home).
/// The first team (lexicographic) anchors the weighted least-squares solve;
/// strengths are re-centred to sum to zero after every iteration, which
/// leaves all log-means unchanged.
inline StrengthTable fit_strengths(const std::vector<MatchRecord>& matches, Date reference_date,
                                   double half_life_days, const StrengthFitOptions& opt = {}) {
  const auto teams = detail::collect_teams(matches);
  if (teams.size() < 2) fail(ErrorCode::InvalidArgument, "need at least 2 teams");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < teams.size(); ++i) index.emplace(teams[i], i);

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& m : matches) edges.emplace_back(index.at(m.home_team), index.at(m.away_team));
  if (!detail::schedule_connected(teams.size(), edges))
    fail(ErrorCode::DisconnectedSchedule, "teams split into groups that never meet");

  const std::size_t n_teams = teams.size();
  const std::size_t n_obs = 2 * matches.size();
  // parameters: [b0, h, r_1 .. r_{T-1}] with r_0 fixed at 0 during the solve
  const std::size_t n_par = n_teams + 1;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_obs), static_cast<Eigen::Index>(n_par));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n_obs)), w(static_cast<Eigen::Index>(n_obs));
  for (std::size_t k = 0; k < matches.size(); ++k) {
    const auto& m = matches[k];
    const double weight = recency_weight(m.date, reference_date, half_life_days);
    const auto home = index.at(m.home_team), away = index.at(m.away_team);
    const auto rh = static_cast<Eigen::Index>(2 * k), ra = rh + 1;
    X(rh, 0) = 1.0;
    X(rh, 1) = 1.0;
    X(ra, 0) = 1.0;
    if (home > 0) {
      X(rh, static_cast<Eigen::Index>(home + 1)) += 1.0;
      X(ra, static_cast<Eigen::Index>(home + 1)) -= 1.0;
    }
    if (away > 0) {
      X(rh, static_cast<Eigen::Index>(away + 1)) -= 1.0;
      X(ra, static_cast<Eigen::Index>(away + 1)) += 1.0;
    }
    y(rh) = m.home_goals;
    y(ra) = m.away_goals;
    w(rh) = weight;
    w(ra) = weight;
  }

  const double mean_goals = w.dot(y) / w.sum();
  if (!(mean_goals > 0.0)) fail(ErrorCode::FailedConvergence, "no goals scored in any weighted match");

  // centred parameters: b0, h, r (all teams)
  double b0 = std::log(mean_goals), h = 0.0;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_teams));

  StrengthTable table;
  table.reference_date = reference_date;
  table.half_life_days = half_life_days;
  bool converged = false;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    Eigen::VectorXd beta(static_cast<Eigen::Index>(n_par));
    beta(0) = b0;
    beta(1) = h;
    for (std::size_t t = 1; t < n_teams; ++t) beta(static_cast<Eigen::Index>(t + 1)) = r(static_cast<Eigen::Index>(t)) - r(0);

    const Eigen::VectorXd eta = X * beta;
    const Eigen::VectorXd mu = eta.array().exp();
    const Eigen::VectorXd working_weight = w.cwiseProduct(mu);
    const Eigen::VectorXd z = eta + (y - mu).cwiseQuotient(mu);
    const Eigen::MatrixXd XtW = X.transpose() * working_weight.asDiagonal();
    const Eigen::MatrixXd info = XtW * X;
    const Eigen::VectorXd rhs = XtW * z;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      fail(ErrorCode::FailedConvergence, "weighted information matrix is singular");
    const Eigen::VectorXd next = ldlt.solve(rhs);
    if (!next.allFinite()) fail(ErrorCode::FailedConvergence, "IRLS produced non-finite parameters");

    Eigen::VectorXd r_next(static_cast<Eigen::Index>(n_teams));
    r_next(0) = 0.0;
    for (std::size_t t = 1; t < n_teams; ++t) r_next(static_cast<Eigen::Index>(t)) = next(static_cast<Eigen::Index>(t + 1));
    r_next.array() -= r_next.mean();

    const double change = std::max({std::abs(next(0) - b0), std::abs(next(1) - h), (r_next - r).cwiseAbs().maxCoeff()});
    b0 = next(0);
    h = next(1);
    r = r_next;
    table.iterations = it + 1;
    if (change < opt.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorCode::FailedConvergence, "IRLS did not converge");

  // exact zero sum after the final centring
  r.array() -= r.mean();
  table.intercept = b0;
  table.home_effect = h;
  for (std::size_t t = 0; t < n_teams; ++t) table.strengths.emplace(teams[t], r(static_cast<Eigen::Index>(t)));
  return table;
}

/// Average goals scored by `team` over all its matches, home or away.
inline double mean_goals_strength(const std::vector<MatchRecord>& matches, const std::string& team) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& m : matches) {
    if (m.home_team == team) {
      total += m.home_goals;
      ++count;
    } else if (m.away_team == team) {
      total += m.away_goals;
      ++count;
    }
  }
  if (count == 0) fail(ErrorCode::UnknownTeam, "team '" + team + "' has no matches");
  return total / static_cast<double>(count);
}

/// Goals scored by `team`, in match order.
inline std::vector<double> goals_scored(const std::vector<MatchRecord>& matches, const std::string& team) {
  std::vector<double> goals;
  for (const auto& m : matches) {
    if (m.home_team == team) goals.push_back(m.home_goals);
    else if (m.away_team == team) goals.push_back(m.away_goals);
  }
  if (goals.empty()) fail(ErrorCode::UnknownTeam, "team '" + team + "' has no matches");
  return goals;
}

inline std::vector<std::string> team_names(const std::vector<MatchRecord>& matches) {
  return detail::collect_teams(matches);
}

/// Reads `date,home_team,away_team,home_goals,away_goals` with ISO-8601 dates.
inline std::vector<MatchRecord> read_matches_csv(const std::filesystem::path& path) {
  const auto lines = core::read_lines(path);
  if (lines.empty()) fail(ErrorCode::ParseError, "missing header row");
  const auto header = core::split_fields(lines.front());
  const char* expected[] = {"date", "home_team", "away_team", "home_goals", "away_goals"};
  if (header.size() != 5) fail(ErrorCode::ParseError, "matches header must have 5 columns");
  for (std::size_t i = 0; i < 5; ++i)
    if (core::trim(header[i]) != expected[i])
      throw ParseError(0, i, "expected header column '" + std::string(expected[i]) + "'");

  std::vector<MatchRecord> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (core::trim(lines[li]).empty()) continue;
    const auto f = core::split_fields(lines[li]);
    if (f.size() != 5) throw ParseError(li, f.size(), "expected 5 fields");
    MatchRecord m;
    m.date = Date::parse(core::trim(f[0]));
    m.home_team = std::string(core::trim(f[1]));
    m.away_team = std::string(core::trim(f[2]));
    for (int side = 0; side < 2; ++side) {
      const auto cell = core::trim(f[3 + side]);
      unsigned goals = 0;
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), goals);
      if (ec != std::errc{} || p != cell.data() + cell.size() || cell.empty())
        throw ParseError(li, 3 + static_cast<std::size_t>(side), "goals must be a non-negative integer");
      (side == 0 ? m.home_goals : m.away_goals) = goals;
    }
    if (m.home_team.empty() || m.home_team == m.away_team)
      throw ParseError(li, 1, "home and away team must be distinct and non-empty");
    out.push_back(std::move(m));
  }
  return out;
}

inline void write_matches_csv(const std::vector<MatchRecord>& matches, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "date,home_team,away_team,home_goals,away_goals\n";
  for (const auto& m : matches)
    os << m.date.to_string() << ',' << m.home_team << ',' << m.away_team << ',' << m.home_goals << ','
       << m.away_goals << '\n';
  core::write_text(path, os.str());
}

/// `#intercept,<b0>` and `#home_effect,<h>` precede the `team,strength` table.
inline std::string strengths_to_csv(const StrengthTable& table) {
  std::ostringstream os;
  os << "#intercept," << core::format_double(table.intercept) << '\n';
  os << "#home_effect," << core::format_double(table.home_effect) << '\n';
  os << "team,strength\n";
  for (const auto& [team, r] : table.strengths) os << team << ',' << core::format_double(r) << '\n';
  return os.str();
}

}  // namespace sel::estimate
