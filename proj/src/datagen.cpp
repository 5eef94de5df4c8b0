#include "dsim/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace dsim {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename E>
struct Named {
  E value;
  const char* name;
};

constexpr Named<Dgp> kDgps[] = {
    {Dgp::Normal, "normal"}, {Dgp::T3, "t3"}, {Dgp::LogNormal, "lognormal"}, {Dgp::ChiSq1, "chisq1"}};

constexpr Named<Deviation> kDeviations[] = {
    {Deviation::Null, "null"},
    {Deviation::Shift, "shift"},
    {Deviation::Scale, "scale"},
    {Deviation::Correlation, "correlation"},
    {Deviation::Kurtosis, "kurtosis"},
    {Deviation::NormalVsT, "normal_vs_t"},
    {Deviation::SkewKurtosis, "skew_kurtosis"},
    {Deviation::OgmSign, "ogm_sign"},
    {Deviation::OgmSize, "ogm_size"},
    {Deviation::OgmDifferent, "ogm_different"}};

constexpr Named<Grouping> kGroupings[] = {{Grouping::G1_1, "1+1"},
                                          {Grouping::G3_1, "3+1"},
                                          {Grouping::G2_2, "2+2"},
                                          {Grouping::G2_1_1, "2+1+1"},
                                          {Grouping::G1_1_1_1, "1+1+1+1"}};

constexpr Named<GridCase> kCases[] = {{GridCase::TwoSample, "two_sample"},
                                      {GridCase::TwoSampleTarget, "two_sample_target"},
                                      {GridCase::FourSample, "four_sample"}};

template <typename E, std::size_t N>
const char* name_of(const Named<E> (&table)[N], E v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

template <typename E, std::size_t N>
E parse(const Named<E> (&table)[N], const std::string& s, const char* what) {
  for (const auto& e : table)
    if (s == e.name) return e.value;
  throw ConfigError(std::string("unknown ") + what + ": '" + s + "'");
}

// Multiplier applied to the deviation parameter for each of the k samples.
std::vector<int> steps(Grouping g) {
  switch (g) {
    case Grouping::G1_1: return {0, 1};
    case Grouping::G3_1: return {0, 0, 0, 1};
    case Grouping::G2_2: return {0, 0, 1, 1};
    case Grouping::G2_1_1: return {0, 0, 1, 2};
    case Grouping::G1_1_1_1: return {0, 1, 2, 3};
  }
  return {};
}

bool uses_increment(Grouping g) { return g == Grouping::G2_1_1 || g == Grouping::G1_1_1_1; }

SampleLaw null_law(Dgp dgp) {
  SampleLaw law;
  switch (dgp) {
    case Dgp::Normal: law.family = SampleLaw::Family::Normal; break;
    case Dgp::T3:
      law.family = SampleLaw::Family::T;
      law.df = 3.0;
      break;
    case Dgp::LogNormal: law.family = SampleLaw::Family::LogNormal; break;
    case Dgp::ChiSq1:
      law.family = SampleLaw::Family::ChiSq;
      law.df = 1.0;
      break;
  }
  return law;
}

double gamma_chisq(std::mt19937_64& rng, double df) {
  std::gamma_distribution<double> g(df / 2.0, 2.0);
  return g(rng);
}

}  // namespace

const char* to_string(Dgp d) { return name_of(kDgps, d); }
const char* to_string(Deviation d) { return name_of(kDeviations, d); }
const char* to_string(Grouping g) { return name_of(kGroupings, g); }
const char* to_string(GridCase c) { return name_of(kCases, c); }
Dgp parse_dgp(const std::string& s) { return parse(kDgps, s, "dgp"); }
Deviation parse_deviation(const std::string& s) { return parse(kDeviations, s, "deviation"); }
Grouping parse_grouping(const std::string& s) { return parse(kGroupings, s, "grouping"); }
GridCase parse_grid_case(const std::string& s) { return parse(kCases, s, "grid case"); }

bool is_ogm(Deviation d) {
  return d == Deviation::OgmSign || d == Deviation::OgmSize || d == Deviation::OgmDifferent;
}

std::string ScenarioSpec::balance_label() const {
  std::string out;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    if (i) out += '/';
    out += fmt(proportions[i]);
  }
  return out;
}

std::string ScenarioSpec::id() const {
  std::ostringstream os;
  os << "dgp=" << to_string(dgp) << ";dev=" << to_string(deviation) << ";mag=" << fmt(magnitude)
     << ";N=" << N << ";p=" << p << ";pi=" << balance_label() << ";grp=" << to_string(grouping)
     << ";y=" << (with_target ? 1 : 0);
  return os.str();
}

std::string ScenarioSpec::null_key() const {
  std::ostringstream os;
  os << "dgp=" << to_string(dgp) << ";N=" << N << ";p=" << p << ";pi=" << balance_label()
     << ";y=" << (with_target ? 1 : 0);
  return os.str();
}

std::string ScenarioSpec::family_key() const {
  std::ostringstream os;
  os << "dgp=" << to_string(dgp) << ";dev=" << to_string(deviation) << ";N=" << N << ";p=" << p
     << ";pi=" << balance_label() << ";grp=" << to_string(grouping) << ";y=" << (with_target ? 1 : 0);
  return os.str();
}

ScenarioSpec ScenarioSpec::null_counterpart() const {
  ScenarioSpec s = *this;
  s.deviation = Deviation::Null;
  s.magnitude = 0.0;
  s.grouping = k() == 2 ? Grouping::G1_1 : Grouping::G3_1;
  return s;
}

OgmSpec OgmSpec::make(int p, OgmVariant v) {
  if (p % 2 != 0) throw ConfigError("outcome model needs an even number of variables");
  OgmSpec o;
  o.variant = v;
  o.beta.resize(p);
  const int h = p / 2;
  o.beta.head(h).setConstant(0.5);
  o.beta.tail(h).setConstant(-0.5);
  switch (v) {
    case OgmVariant::Null: break;
    case OgmVariant::Sign: o.beta = -o.beta; break;
    case OgmVariant::Size: o.beta /= 2.0; break;
    case OgmVariant::Different: o.beta.setConstant(0.5); break;
  }
  return o;
}

std::vector<int> sample_sizes(const ScenarioSpec& spec) {
  if (spec.proportions.size() < 2) throw ConfigError("need at least two sample proportions");
  std::vector<int> out;
  int total = 0;
  for (double pi : spec.proportions) {
    const double n = pi * spec.N;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 || r < 1) throw ConfigError("non-integral sample size " + fmt(n));
    out.push_back(static_cast<int>(r));
    total += static_cast<int>(r);
  }
  if (total != spec.N) throw ConfigError("sample sizes do not sum to N");
  return out;
}

std::vector<Deviation> deviations_for(Dgp dgp, int k) {
  switch (dgp) {
    case Dgp::Normal:
      if (k == 2)
        return {Deviation::Shift, Deviation::Scale, Deviation::Correlation, Deviation::NormalVsT};
      return {Deviation::Shift, Deviation::Scale, Deviation::Correlation};
    case Dgp::T3: return {Deviation::Shift, Deviation::Scale, Deviation::Correlation, Deviation::Kurtosis};
    case Dgp::LogNormal: return {Deviation::Shift, Deviation::Scale};
    case Dgp::ChiSq1: return {Deviation::SkewKurtosis};
  }
  return {};
}

void validate(const ScenarioSpec& spec) {
  const int k = spec.k();
  if (k != 2 && k != 4) throw ConfigError("k must be 2 or 4");
  if (spec.p < 1 || spec.N < k) throw ConfigError("invalid N or p");
  const bool grouping_ok = (k == 2) == (spec.grouping == Grouping::G1_1);
  if (!grouping_ok) throw ConfigError("grouping inconsistent with k");
  if (spec.with_target && spec.p % 2 != 0) throw ConfigError("target requires even p");
  if (is_ogm(spec.deviation)) {
    if (!spec.with_target || k != 2) throw ConfigError("OGM deviations require a target and k = 2");
  } else if (spec.deviation != Deviation::Null) {
    const auto allowed = deviations_for(spec.dgp, k);
    if (std::find(allowed.begin(), allowed.end(), spec.deviation) == allowed.end())
      throw ConfigError(std::string("invalid pairing: ") + to_string(spec.dgp) + " + " +
                        to_string(spec.deviation));
  }
  switch (spec.deviation) {
    case Deviation::Scale:
      if (!(spec.magnitude > 0)) throw ConfigError("scale factor must be positive");
      break;
    case Deviation::Correlation: {
      const int top = steps(spec.grouping).back();
      if (spec.magnitude * top >= 1.0 || spec.magnitude < 0) throw ConfigError("correlation out of range");
      break;
    }
    case Deviation::Kurtosis:
    case Deviation::NormalVsT:
      if (!uses_increment(spec.grouping) && !(spec.magnitude > 2.0))
        throw ConfigError("t degrees of freedom must exceed 2");
      break;
    case Deviation::SkewKurtosis:
      if (!(spec.magnitude > 0)) throw ConfigError("chi-square degrees of freedom must be positive");
      break;
    default: break;
  }
  sample_sizes(spec);
}

std::vector<SampleLaw> sample_laws(const ScenarioSpec& spec) {
  validate(spec);
  const auto st = steps(spec.grouping);
  std::vector<SampleLaw> laws;
  for (int j = 0; j < spec.k(); ++j) {
    SampleLaw law = null_law(spec.dgp);
    const int t = st[static_cast<std::size_t>(j)];
    const double m = spec.magnitude;
    switch (spec.deviation) {
      case Deviation::Shift: law.shift = t * m; break;
      case Deviation::Scale: law.scale = std::pow(m, t); break;
      case Deviation::Correlation: law.rho = t * m; break;
      case Deviation::Kurtosis:
        law.df = uses_increment(spec.grouping) ? 3.0 + t * m : (t ? m : 3.0);
        break;
      case Deviation::SkewKurtosis:
        law.df = uses_increment(spec.grouping) ? 1.0 + t * m : (t ? m : 1.0);
        break;
      case Deviation::NormalVsT:
        if (t) {
          law.family = SampleLaw::Family::T;
          law.df = m;
        }
        break;
      default: break;
    }
    laws.push_back(law);
  }
  return laws;
}

Eigen::VectorXd location(const SampleLaw& law, int p) {
  return Eigen::VectorXd::Constant(p, law.shift / std::sqrt(static_cast<double>(p)));
}

Eigen::VectorXd component_scale_factors(const SampleLaw& law, int p) {
  return Eigen::VectorXd::Constant(p, std::pow(law.scale, 1.0 / p));
}

Eigen::MatrixXd equicorrelation(double rho, int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(p, p, rho);
  m.diagonal().setOnes();
  return m;
}

Eigen::MatrixXd dispersion(const SampleLaw& law, int p) {
  Eigen::MatrixXd s = equicorrelation(law.rho, p);
  if (law.family == SampleLaw::Family::Normal || law.family == SampleLaw::Family::T) {
    s *= std::pow(law.scale, 1.0 / p);
    if (law.family == SampleLaw::Family::T) s *= (law.df - 2.0) / law.df;
  }
  return s;
}

LogNormalParams unit_lognormal() {
  // exp(mu + s^2/2) = 1 and (exp(s^2) - 1) exp(2 mu + s^2) = 1
  const double s2 = std::log(2.0);
  return {-s2 / 2.0, std::sqrt(s2)};
}

DataMatrix draw(const SampleLaw& law, int n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  DataMatrix x(n, p);
  const Eigen::RowVectorXd mu = location(law, p).transpose();
  switch (law.family) {
    case SampleLaw::Family::Normal:
    case SampleLaw::Family::T: {
      const Eigen::MatrixXd sigma = dispersion(law, p);
      Eigen::LLT<Eigen::MatrixXd> llt(sigma);
      if (llt.info() != Eigen::Success) throw ConfigError("dispersion matrix not positive definite");
      const Eigen::MatrixXd l = llt.matrixL();
      Eigen::VectorXd v(p);
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < p; ++c) v(c) = z(rng);
        double w = 1.0;
        if (law.family == SampleLaw::Family::T) w = std::sqrt(gamma_chisq(rng, law.df) / law.df);
        x.row(i) = mu + (l * v).transpose() / w;
      }
      break;
    }
    case SampleLaw::Family::LogNormal: {
      const auto ln = unit_lognormal();
      const double f = std::pow(law.scale, 1.0 / p);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < p; ++c) x(i, c) = f * std::exp(ln.mu + ln.sigma * z(rng));
      x.rowwise() += mu;
      break;
    }
    case SampleLaw::Family::ChiSq: {
      const double sd = std::sqrt(2.0 * law.df);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < p; ++c) x(i, c) = (gamma_chisq(rng, law.df) - law.df) / sd;
      break;
    }
  }
  return x;
}

double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

Eigen::VectorXi gen_target(const DataMatrix& x, const OgmSpec& ogm, std::uint64_t seed, bool* degenerate) {
  if (ogm.beta.size() != x.cols()) throw DimensionError("coefficient length does not match p");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXi y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double prob = logistic(ogm.intercept + x.row(i).dot(ogm.beta));
    y(i) = u(rng) < prob ? 1 : 0;
  }
  if (degenerate) *degenerate = y.size() > 0 && (y.minCoeff() == y.maxCoeff());
  return y;
}

MultiSample sample_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  const auto laws = sample_laws(spec);
  const auto sizes = sample_sizes(spec);
  std::vector<DataMatrix> xs;
  for (int j = 0; j < spec.k(); ++j)
    xs.push_back(draw(laws[static_cast<std::size_t>(j)], sizes[static_cast<std::size_t>(j)], spec.p,
                      derive_seed(seed, static_cast<std::uint64_t>(j))));
  if (!spec.with_target) return MultiSample(std::move(xs));

  OgmVariant deviating = OgmVariant::Null;
  if (spec.deviation == Deviation::OgmSign) deviating = OgmVariant::Sign;
  if (spec.deviation == Deviation::OgmSize) deviating = OgmVariant::Size;
  if (spec.deviation == Deviation::OgmDifferent) deviating = OgmVariant::Different;
  std::vector<Eigen::VectorXi> ys;
  bool any_degenerate = false;
  for (int j = 0; j < spec.k(); ++j) {
    const auto ogm = OgmSpec::make(spec.p, j == spec.k() - 1 ? deviating : OgmVariant::Null);
    bool deg = false;
    ys.push_back(gen_target(xs[static_cast<std::size_t>(j)], ogm,
                            derive_seed(seed, 1000 + static_cast<std::uint64_t>(j)), &deg));
    any_degenerate = any_degenerate || deg;
  }
  MultiSample ms(std::move(xs), std::move(ys));
  ms.set_degenerate_target(any_degenerate);
  return ms;
}

std::vector<double> magnitude_grid(Dgp dgp, Deviation dev, int k, Grouping g) {
  const bool inc = uses_increment(g);
  switch (dev) {
    case Deviation::Null: return {0.0};
    case Deviation::Shift: return {0.1, 0.25, 0.5, 0.75, 1.0, 1.5};
    case Deviation::Scale: return {1.0 / 10, 1.0 / 3, 1.0 / 2, 2.0 / 3, 4.0 / 5, 5.0 / 4, 3.0 / 2, 2.0, 3.0, 10.0};
    case Deviation::Correlation:
      if (k == 2) return {0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8};
      return {0.05, 0.1, 0.2, 0.3};
    case Deviation::Kurtosis:
      if (inc) return {0.05, 0.1, 0.2, 0.3, 0.4};
      return {3.05, 3.1, 3.2, 3.3, 3.4};
    case Deviation::NormalVsT: return {30.0, 20.0, 10.0, 5.0, 3.0};
    case Deviation::SkewKurtosis:
      if (inc) return {0.1, 0.5, 1.0, 2.0, 3.0, 4.0};
      return {1.1, 1.5, 2.0, 3.0, 4.0, 5.0};
    case Deviation::OgmSign:
    case Deviation::OgmSize:
    case Deviation::OgmDifferent: return {1.0};
  }
  (void)dgp;
  return {};
}

std::vector<int> n_grid(int k, GridScale scale) {
  if (k == 2) return scale == GridScale::Full ? std::vector<int>{50, 100, 200, 500, 1000} : std::vector<int>{50, 100, 200};
  return scale == GridScale::Full ? std::vector<int>{100, 200, 400} : std::vector<int>{100, 200};
}

std::vector<int> p_grid(GridScale scale) {
  return scale == GridScale::Full ? std::vector<int>{2, 10, 50} : std::vector<int>{2, 10};
}

std::vector<std::vector<double>> balance_grid(int k) {
  if (k == 2) return {{0.5, 0.5}, {0.2, 0.8}};
  return {{0.25, 0.25, 0.25, 0.25}, {0.1, 0.2, 0.3, 0.4}};
}

namespace {

std::vector<double> thin(const std::vector<double>& full) {
  std::vector<double> out;
  for (std::size_t i = 0; i < full.size(); i += 2) out.push_back(full[i]);
  if (out.back() != full.back()) out.push_back(full.back());
  return out;
}

}  // namespace

std::vector<ScenarioSpec> scenario_grid(GridCase c, GridScale scale) {
  const int k = c == GridCase::FourSample ? 4 : 2;
  const bool target = c == GridCase::TwoSampleTarget;
  const std::vector<Grouping> groupings =
      k == 2 ? std::vector<Grouping>{Grouping::G1_1}
             : std::vector<Grouping>{Grouping::G3_1, Grouping::G2_2, Grouping::G2_1_1, Grouping::G1_1_1_1};
  const Dgp dgps[] = {Dgp::Normal, Dgp::T3, Dgp::LogNormal, Dgp::ChiSq1};

  std::vector<ScenarioSpec> nulls, alts;
  for (int N : n_grid(k, scale)) {
    for (int p : p_grid(scale)) {
      for (const auto& props : balance_grid(k)) {
        for (Dgp dgp : dgps) {
          ScenarioSpec base;
          base.dgp = dgp;
          base.N = N;
          base.p = p;
          base.proportions = props;
          base.with_target = target;
          base.grouping = k == 2 ? Grouping::G1_1 : Grouping::G3_1;
          nulls.push_back(base);

          auto devs = deviations_for(dgp, k);
          if (target) devs.insert(devs.end(), {Deviation::OgmSign, Deviation::OgmSize, Deviation::OgmDifferent});
          for (Deviation dev : devs) {
            for (Grouping g : groupings) {
              auto mags = magnitude_grid(dgp, dev, k, g);
              if (scale == GridScale::Desk) mags = thin(mags);
              for (double m : mags) {
                ScenarioSpec s = base;
                s.deviation = dev;
                s.magnitude = m;
                s.grouping = g;
                alts.push_back(s);
              }
            }
          }
        }
      }
    }
  }
  nulls.insert(nulls.end(), alts.begin(), alts.end());
  return nulls;
}

}  // namespace dsim
