#include "jto/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include <boost/math/distributions/normal.hpp>

#include "jto/error.hpp"

namespace jto::synth {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

bool bernoulli(Rng& rng, double p) { return uniform(rng) < p; }

std::string numbered(char prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

std::string iso_date(int day_offset) {
  using namespace std::chrono;
  const sys_days base = year{2015} / January / 1;
  const year_month_day ymd{base + days{day_offset}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

GeoPoint random_in_disk(Rng& rng, GeoPoint center, double radius) {
  const double bearing = 2.0 * std::numbers::pi * uniform(rng);
  const double r = radius * std::sqrt(uniform(rng));
  return geo::destination_point(center, bearing, r);
}

GeoPoint jitter(Rng& rng, GeoPoint center, double spread) {
  const double bearing = 2.0 * std::numbers::pi * uniform(rng);
  const double r = std::abs(std::normal_distribution<double>(0.0, spread)(rng));
  return geo::destination_point(center, bearing, r);
}

// Inverse-CDF draw from an exponential with the given mean truncated to [0, max].
double truncated_exponential(Rng& rng, double mean, double max) {
  const double tail = 1.0 - std::exp(-max / mean);
  return -mean * std::log(1.0 - uniform(rng) * tail);
}

int truncated_normal_int(Rng& rng, double mean, double sd, int lo, int hi) {
  std::normal_distribution<double> normal(mean, sd);
  for (;;) {
    const double v = normal(rng);
    if (v >= lo && v <= hi) return static_cast<int>(std::lround(v));
  }
}

// NB2 count as a gamma-Poisson mixture: mean mu, variance mu + mu^2 / theta.
int negative_binomial(Rng& rng, double mu, double theta) {
  const double lambda = std::gamma_distribution<double>(theta, mu / theta)(rng);
  if (!(lambda > 0.0)) return 0;
  return static_cast<int>(std::poisson_distribution<long long>(lambda)(rng));
}

// Exactly round(p * n) true entries in random order.
std::vector<bool> exact_allocation(Rng& rng, std::size_t n, double p) {
  const auto ones = static_cast<std::size_t>(std::lround(p * static_cast<double>(n)));
  std::vector<bool> v(n, false);
  std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(ones, n)), true);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

double linear_predictor(const Coefficients& beta, const OverdoseCase& c, double sales) {
  return beta[0] + beta[1] * sales + beta[2] * c.education.value_or(0) +
         beta[3] * (c.sex == Sex::male ? 1.0 : 0.0) + beta[4] * c.age +
         beta[5] * (c.marital == Marital::married ? 1.0 : 0.0) + beta[6] * (c.race == Race::black ? 1.0 : 0.0);
}

std::string synthetic_address(std::size_t i) {
  return std::to_string(1000 + i) + " Synthetic Way";
}

}  // namespace

void validate(const SyntheticConfig& config) {
  if (config.n_cases == 0) throw ConfigError("synthetic n_cases must be positive");
  if (!(config.theta > 0.0) || !std::isfinite(config.theta))
    throw ConfigError("synthetic theta must be positive");
  for (double b : config.beta)
    if (!std::isfinite(b)) throw ConfigError("synthetic beta must be finite");
  const auto& m = config.marginals;
  for (double p : {m.male, m.black, m.married, config.address_only_share, config.network.fir_share,
                   config.network.drug_share, config.network.prolific_gang_share, config.network.other_gang_share})
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("synthetic proportions must lie in [0,1]");
  if (!(m.age_sd > 0) || m.age_min > m.age_max) throw ConfigError("synthetic age marginals invalid");
  if (std::accumulate(m.education_weights.begin(), m.education_weights.end(), 0.0) <= 0 ||
      std::any_of(m.education_weights.begin(), m.education_weights.end(), [](double w) { return w < 0; }))
    throw ConfigError("synthetic education weights invalid");
  if (!(m.sales_mean > 0) || !(m.sales_max > 0)) throw ConfigError("synthetic sales distance marginals invalid");
  const auto& n = config.network;
  if (n.n_prolific < 1 || n.n_persons < n.n_prolific + 4 || n.n_events < 0 || n.n_hotspots < 1)
    throw ConfigError("synthetic network shape invalid");
  if (config.max_journey_miles && *config.max_journey_miles < 0) throw ConfigError("max_journey_miles negative");
}

SyntheticData generate_synthetic(const SyntheticConfig& config) {
  validate(config);
  Rng rng(config.seed);
  const auto& shape = config.network;
  SyntheticData out;

  // Persons. The first n_prolific shuffled indices are the intended prolific sellers.
  const auto n_persons = static_cast<std::size_t>(shape.n_persons);
  std::vector<std::size_t> order(n_persons);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_prolific(n_persons, false);
  const auto n_prolific = static_cast<std::size_t>(shape.n_prolific);
  const auto n_gang_prolific =
      static_cast<std::size_t>(std::lround(shape.prolific_gang_share * static_cast<double>(n_prolific)));
  out.persons.resize(n_persons);
  for (std::size_t i = 0; i < n_persons; ++i) out.persons[i].person_id = numbered('P', i + 1, 5);
  std::vector<std::size_t> prolific_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_prolific));
  std::sort(prolific_idx.begin(), prolific_idx.end());
  for (std::size_t k = 0; k < prolific_idx.size(); ++k) {
    auto& p = out.persons[prolific_idx[k]];
    is_prolific[prolific_idx[k]] = true;
    p.violent_prior_count = 1 + static_cast<int>(std::poisson_distribution<int>(1.0)(rng));
    p.gang_member = k < n_gang_prolific;
    out.intended_prolific.push_back(p.person_id);
  }
  // Drug-arrest partners come from the prolific set or persons without violent
  // priors, so nobody outside the intended set can qualify as prolific.
  std::vector<std::size_t> clean_pool;
  for (std::size_t i = 0; i < n_persons; ++i) {
    if (is_prolific[i]) continue;
    auto& p = out.persons[i];
    p.gang_member = bernoulli(rng, shape.other_gang_share);
    p.violent_prior_count = bernoulli(rng, 0.35) ? 1 + std::poisson_distribution<int>(0.8)(rng) : 0;
    if (p.violent_prior_count == 0) clean_pool.push_back(i);
  }
  if (clean_pool.empty()) clean_pool = prolific_idx;

  // Hotspots and each seller's home hotspot.
  std::vector<GeoPoint> hotspots;
  for (int h = 0; h < shape.n_hotspots; ++h)
    hotspots.push_back(random_in_disk(rng, shape.region_center, 0.8 * shape.region_radius_miles));
  std::vector<std::size_t> home(n_persons, 0);
  for (std::size_t k = 0; k < prolific_idx.size(); ++k) home[prolific_idx[k]] = k % hotspots.size();

  std::size_t event_counter = 0;
  auto add_event = [&](EventType type, bool drug, std::vector<std::size_t> members) {
    CoEventRecord e;
    e.event_id = numbered('E', ++event_counter, 6);
    e.type = type;
    e.date = iso_date(static_cast<int>(std::uniform_int_distribution<int>(0, 3 * 365 - 1)(rng)));
    e.drug_related = drug;
    auto seller = std::find_if(members.begin(), members.end(), [&](std::size_t m) { return is_prolific[m]; });
    if (seller != members.end()) {
      e.location = jitter(rng, hotspots[home[*seller]], shape.hotspot_spread_miles);
    } else if (!bernoulli(rng, 0.05)) {
      e.location = random_in_disk(rng, shape.region_center, shape.region_radius_miles);
    }
    for (auto m : members) e.participants.push_back(out.persons[m].person_id);
    out.events.push_back(std::move(e));
  };

  // Repeated drug arrests for each intended seller.
  for (auto s : prolific_idx) {
    const int k = 2 + std::poisson_distribution<int>(0.7)(rng);
    for (int j = 0; j < k; ++j) {
      std::vector<std::size_t> members{s};
      const int partners = 1 + (bernoulli(rng, 0.3) ? 1 : 0);
      for (int q = 0; q < partners; ++q) {
        const bool pick_seller = bernoulli(rng, 0.25);
        const auto& pool = pick_seller ? prolific_idx : clean_pool;
        auto cand = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        if (std::find(members.begin(), members.end(), cand) == members.end()) members.push_back(cand);
      }
      if (members.size() < 2) members.push_back(clean_pool.front() == s ? clean_pool.back() : clean_pool.front());
      add_event(EventType::arrest, true, std::move(members));
    }
  }

  // Background arrests and field interviews. Drug-related flags only on field
  // interviews, which never count as arrests.
  std::uniform_int_distribution<std::size_t> any_person(0, n_persons - 1);
  for (int i = 0; i < shape.n_events; ++i) {
    const bool fir = bernoulli(rng, shape.fir_share);
    const bool drug = fir && bernoulli(rng, shape.drug_share / std::max(shape.fir_share, 1e-9));
    const std::size_t size = bernoulli(rng, 0.1) ? 1 : static_cast<std::size_t>(2 + std::uniform_int_distribution<int>(0, 2)(rng));
    std::vector<std::size_t> members;
    if (bernoulli(rng, 0.3)) members.push_back(prolific_idx[std::uniform_int_distribution<std::size_t>(0, n_prolific - 1)(rng)]);
    while (members.size() < size) {
      auto cand = any_person(rng);
      if (std::find(members.begin(), members.end(), cand) == members.end()) members.push_back(cand);
    }
    add_event(fir ? EventType::field_interview : EventType::arrest, drug, std::move(members));
  }

  std::vector<GeoPoint> located;
  for (const auto& e : out.events) {
    if (!e.location) continue;
    const bool seller = std::any_of(e.participants.begin(), e.participants.end(), [&](const std::string& id) {
      return std::binary_search(out.intended_prolific.begin(), out.intended_prolific.end(), id);
    });
    if (seller) located.push_back(*e.location);
  }
  out.sales_points = geo::dedupe_points(located);

  // Victims.
  const auto& m = config.marginals;
  const std::size_t n = config.n_cases;
  std::vector<bool> male, black, married;
  if (config.exact_marginals) {
    male = exact_allocation(rng, n, m.male);
    black = exact_allocation(rng, n, m.black);
    married = exact_allocation(rng, n, m.married);
  }
  std::discrete_distribution<int> education(m.education_weights.begin(), m.education_weights.end());
  out.cases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    OverdoseCase c;
    c.case_id = numbered('C', i + 1, 5);
    c.sex = (config.exact_marginals ? male[i] : bernoulli(rng, m.male)) ? Sex::male : Sex::female;
    const bool is_black = config.exact_marginals ? black[i] : bernoulli(rng, m.black);
    c.race = is_black ? Race::black : (bernoulli(rng, 0.9) ? Race::white : Race::other);
    c.marital = (config.exact_marginals ? married[i] : bernoulli(rng, m.married)) ? Marital::married
                                                                                  : Marital::not_married;
    c.age = truncated_normal_int(rng, m.age_mean, m.age_sd, m.age_min, m.age_max);
    c.education = 1 + education(rng);

    const GeoPoint anchor =
        out.sales_points[std::uniform_int_distribution<std::size_t>(0, out.sales_points.size() - 1)(rng)];
    const double offset = truncated_exponential(rng, m.sales_mean, m.sales_max);
    const GeoPoint death =
        geo::destination_point(anchor, 2.0 * std::numbers::pi * uniform(rng), offset);
    const double sales = geo::nearest_sales_distance(death, out.sales_points);

    const double mu = std::exp(linear_predictor(config.beta, c, sales));
    int y = negative_binomial(rng, mu, config.theta);
    if (config.max_journey_miles)
      while (y > *config.max_journey_miles) y = negative_binomial(rng, mu, config.theta);
    const GeoPoint home =
        y == 0 ? death : geo::destination_point(death, 2.0 * std::numbers::pi * uniform(rng), y);

    c.death_location = death;
    if (bernoulli(rng, config.address_only_share)) {
      const std::string addr = synthetic_address(i + 1);
      out.gazetteer.add(addr, home);
      c.residence = addr;
    } else {
      c.residence = home;
    }
    c.journey_miles = static_cast<double>(y);
    c.sales_distance_miles = sales;
    out.cases.push_back(std::move(c));
  }
  return out;
}

std::vector<double> moment_matched_sample(std::size_t n, std::size_t n_at_min, double lo, double hi,
                                          double mean, double sd, double interior_floor) {
  if (n < n_at_min + 3) throw ConfigError("moment-matched sample too small");
  const std::size_t m = n - n_at_min - 1;
  const double nn = static_cast<double>(n);
  const double total = mean * nn;
  const double total_sq = (nn - 1.0) * sd * sd + nn * mean * mean;
  const double s_int = total - static_cast<double>(n_at_min) * lo - hi;
  const double q_int = total_sq - static_cast<double>(n_at_min) * lo * lo - hi * hi;
  const double a = lo + interior_floor;

  std::vector<double> u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(m);

  auto scale_for = [&](double k, double& p1, double& p2) {
    p1 = p2 = 0.0;
    for (double ui : u) {
      const double p = std::pow(ui, k);
      p1 += p;
      p2 += p * p;
    }
    return (s_int - static_cast<double>(m) * a) / p1;
  };
  auto excess = [&](double k) {
    double p1, p2;
    const double c = scale_for(k, p1, p2);
    return static_cast<double>(m) * a * a + 2.0 * a * c * p1 + c * c * p2 - q_int;
  };

  double k_lo = 1e-3, k_hi = 200.0;
  if (excess(k_lo) > 0 || excess(k_hi) < 0) throw ConfigError("moment targets infeasible for sample shape");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (k_lo + k_hi);
    (excess(mid) < 0 ? k_lo : k_hi) = mid;
  }
  const double k = 0.5 * (k_lo + k_hi);
  double p1, p2;
  const double c = scale_for(k, p1, p2);
  if (!(c > 0) || a + c * std::pow(u.back(), k) >= hi)
    throw ConfigError("moment targets infeasible within bounds");

  std::vector<double> out(n_at_min, lo);
  for (double ui : u) out.push_back(a + c * std::pow(ui, k));
  out.push_back(hi);
  return out;
}

std::vector<int> integer_moment_sample(std::size_t n, int lo, int hi, double mean, double sd) {
  if (n < 3) throw ConfigError("integer sample too small");
  const boost::math::normal normal;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  const long long target = std::llround(mean * static_cast<double>(n));

  auto build = [&](double spread) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = std::clamp(static_cast<int>(std::lround(mean + spread * z[i])), lo, hi);
    v.front() = lo;
    v.back() = hi;
    long long sum = std::accumulate(v.begin(), v.end(), 0LL);
    // Nudge interior values nearest the center until the sum hits the target.
    std::size_t mid = n / 2;
    for (std::size_t step = 0; sum != target && step < 4 * n * static_cast<std::size_t>(hi - lo + 1); ++step) {
      const std::size_t off = (step / 2) % (n / 2 - 1) + 1;
      const std::size_t i = (step % 2) ? mid + off - 1 : mid - off;
      if (i == 0 || i >= n - 1) continue;
      if (sum < target && v[i] < hi) {
        ++v[i];
        ++sum;
      } else if (sum > target && v[i] > lo) {
        --v[i];
        --sum;
      }
    }
    return v;
  };
  auto sample_sd = [](const std::vector<int>& v) {
    const double mu = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0;
    for (int x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  };

  std::vector<int> best;
  double best_err = std::numeric_limits<double>::infinity();
  for (int step = 0; step <= 2000; ++step) {
    const double spread = sd * (0.5 + step * 0.0005);
    auto v = build(spread);
    if (std::accumulate(v.begin(), v.end(), 0LL) != target) continue;
    const double err = std::abs(sample_sd(v) - sd);
    if (err < best_err) {
      best_err = err;
      best = std::move(v);
    }
  }
  if (best.empty()) throw ConfigError("integer moment targets infeasible");
  return best;
}

SyntheticData calibrated_fixture() {
  SyntheticData out;
  Rng rng(20160301);

  // Hotspot lattice: 4 x 3 points 11.5 miles apart, farther than twice the
  // largest sales distance, so nearest-hotspot distances are exact.
  const GeoPoint center{39.1620, -84.5380};
  const geo::LocalProjection proj(center);
  std::vector<GeoPoint> hotspots;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) hotspots.push_back(proj.inverse((c - 1.5) * 11.5, (r - 1.0) * 11.5));

  constexpr std::size_t kSeeds = 147;
  constexpr std::size_t kCycleArrests = kSeeds;       // seed i with seed i+1, drug-related
  constexpr std::size_t kFirstArrests = 3025;         // arrest-sourced, first degree
  constexpr std::size_t kFirstFir = 15033;
  constexpr std::size_t kDrugFir = 1742 - kCycleArrests;
  constexpr std::size_t kSecondArrests = 1472;
  constexpr std::size_t kSecondFir = 5974;
  constexpr std::size_t kThirdArrests = 574;
  constexpr std::size_t kThirdFir = 2018;

  std::size_t person_counter = 0;
  auto new_person = [&](bool gang, int violent) {
    out.persons.push_back({numbered('P', ++person_counter, 5), gang, violent});
    return out.persons.size() - 1;
  };

  // Gang sellers spaced around the cycle with gaps of 2..6 sellers, so every
  // other seller reaches a gang member within three hops.
  std::vector<int> gaps;
  for (int rep = 0; rep < 8; ++rep)
    for (int g : {2, 3, 4, 5}) gaps.push_back(g);
  for (int i = 0; i < 3; ++i) gaps[4 * i + 3] = 6;
  std::vector<bool> gang_seed(kSeeds, false);
  {
    std::size_t pos = 0;
    for (int g : gaps) {
      gang_seed[pos] = true;
      pos += static_cast<std::size_t>(g) + 1;
    }
  }
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < kSeeds; ++i) seeds.push_back(new_person(gang_seed[i], 1 + static_cast<int>(i % 3)));

  std::size_t event_counter = 0;
  auto add_event = [&](EventType type, bool drug, std::size_t a, std::size_t b, std::optional<GeoPoint> loc) {
    CoEventRecord e;
    e.event_id = numbered('E', ++event_counter, 6);
    e.type = type;
    e.date = iso_date(static_cast<int>(event_counter % (3 * 365)));
    e.participants = {out.persons[a].person_id, out.persons[b].person_id};
    e.drug_related = drug;
    e.location = loc;
    out.events.push_back(std::move(e));
  };
  auto hotspot_of = [&](std::size_t seed_rank) { return hotspots[seed_rank % hotspots.size()]; };
  auto background = [&]() { return random_in_disk(rng, center, 12.0); };

  for (std::size_t i = 0; i < kSeeds; ++i)
    add_event(EventType::arrest, true, seeds[i], seeds[(i + 1) % kSeeds], hotspot_of(i));

  std::vector<std::size_t> first_ring;
  auto extend = [&](const std::vector<std::size_t>& inner, std::size_t count, EventType type,
                    std::size_t drug_count, bool at_hotspot, std::vector<std::size_t>& outer,
                    std::size_t& cursor) {
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t rank = cursor++ % inner.size();
      const std::size_t anchor = inner[rank];
      const std::size_t leaf = new_person(false, (person_counter % 4 == 0) ? 1 : 0);
      outer.push_back(leaf);
      add_event(type, k < drug_count, anchor, leaf,
                at_hotspot ? std::optional<GeoPoint>(hotspot_of(rank)) : std::optional<GeoPoint>(background()));
    }
  };
  std::size_t cursor = 0;
  extend(seeds, kFirstArrests - kCycleArrests, EventType::arrest, 0, true, first_ring, cursor);
  extend(seeds, kFirstFir, EventType::field_interview, kDrugFir, true, first_ring, cursor);
  std::vector<std::size_t> second_ring, third_ring;
  cursor = 0;
  extend(first_ring, kSecondArrests, EventType::arrest, 0, false, second_ring, cursor);
  extend(first_ring, kSecondFir, EventType::field_interview, 0, false, second_ring, cursor);
  cursor = 0;
  extend(second_ring, kThirdArrests, EventType::arrest, 0, false, third_ring, cursor);
  extend(second_ring, kThirdFir, EventType::field_interview, 0, false, third_ring, cursor);

  for (auto s : seeds) out.intended_prolific.push_back(out.persons[s].person_id);
  std::sort(out.intended_prolific.begin(), out.intended_prolific.end());
  out.sales_points = hotspots;

  // Victims: every descriptive row matches its target summary at the printed precision.
  constexpr std::size_t kCases = 195;
  auto journeys = moment_matched_sample(kCases, 91, 0.0, 58.10, 5.818, 10.685, 0.1);
  auto sales = moment_matched_sample(kCases, 10, 0.0, 5.43, 0.756, 1.27, 0.02);
  auto ages = integer_moment_sample(kCases, 19, 83, 41.76, 12.1);
  std::vector<int> education;
  const int counts[] = {12, 53, 78, 24, 13, 6};
  for (int level = 1; level <= 6; ++level) education.insert(education.end(), counts[level - 1], level);
  // Nine victims have no level in the category breakdown; these values close
  // the gap to the tabulated mean and range.
  for (int v : {7, 6, 5, 4, 4, 4, 3, 3, 2}) education.push_back(v);
  std::shuffle(journeys.begin(), journeys.end(), rng);
  std::shuffle(sales.begin(), sales.end(), rng);
  std::shuffle(ages.begin(), ages.end(), rng);
  std::shuffle(education.begin(), education.end(), rng);
  const auto male = exact_allocation(rng, kCases, 0.641);
  const auto black = exact_allocation(rng, kCases, 0.1641);
  const auto married = exact_allocation(rng, kCases, 0.159);

  for (std::size_t i = 0; i < kCases; ++i) {
    OverdoseCase c;
    c.case_id = numbered('C', i + 1, 5);
    c.sex = male[i] ? Sex::male : Sex::female;
    c.race = black[i] ? Race::black : (i % 10 == 3 ? Race::other : Race::white);
    c.marital = married[i] ? Marital::married : Marital::not_married;
    c.age = ages[i];
    c.education = education[i];
    const GeoPoint hub = hotspots[std::uniform_int_distribution<std::size_t>(0, hotspots.size() - 1)(rng)];
    const GeoPoint death =
        sales[i] == 0.0 ? hub : geo::destination_point(hub, 2.0 * std::numbers::pi * uniform(rng), sales[i]);
    const GeoPoint home = journeys[i] == 0.0
                              ? death
                              : geo::destination_point(death, 2.0 * std::numbers::pi * uniform(rng), journeys[i]);
    c.death_location = death;
    if (i % 10 == 9) {
      const std::string addr = synthetic_address(i + 1);
      out.gazetteer.add(addr, home);
      c.residence = addr;
    } else {
      c.residence = home;
    }
    c.journey_miles = journeys[i];
    c.sales_distance_miles = sales[i];
    out.cases.push_back(std::move(c));
  }
  return out;
}

}  // namespace jto::synth
