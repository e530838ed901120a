// ldwait: large-deviation statistics of long waiting times in Bernoulli
// sequences.
//
// Exit codes: 0 success, 1 usage, 2 domain, 3 numerical.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ldwait/commands.hpp"
#include "ldwait/error.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      if (!(v > 0.0 && v < 1.0)) return "value must lie in (0, 1): " + s;
      return {};
    },
    "in (0,1)", "OPEN_UNIT");

const CLI::Validator kPositive(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      if (!(v > 0.0 && v <= ldwait::commands::kMaxQ)) return "value must lie in (0, 1e4]: " + s;
      return {};
    },
    "in (0,1e4]", "POSITIVE");

struct Options {
  std::string format = "csv";
  double p = 0.5;
  std::optional<double> q;
  std::optional<double> q_min;
  std::optional<double> q_max;
  double step = 0.1;
  std::int64_t n = 1;
  std::int64_t n_max = 100;
  double rel_tol = ldwait::series::kDefaultRelTol;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::uint64_t streams = 8;
  std::vector<double> alphabet;
  std::size_t marked = 0;
  double beta = ldwait::objective::kDefaultBeta;
  std::vector<double> p_list = {0.1, 0.3, 0.5, 0.7};
};

void emit(const ldwait::report::OutputRecord& rec, const std::string& format) {
  if (format == "json") {
    ldwait::report::write_json(std::cout, rec);
  } else {
    ldwait::report::write_csv(std::cout, rec);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-deviation statistics of long waiting times in Bernoulli sequences"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* rate = app.add_subcommand("rate", "Rate function I_p(q), its derivatives and asymptote");
  rate->add_option("--p", opt.p, "Probability of the marked symbol")->required()->check(kOpenUnit);
  auto* rate_q = rate->add_option("--q", opt.q, "Single threshold q")->check(kPositive);
  auto* rate_qmin = rate->add_option("--q-min", opt.q_min, "Start of q range")->check(kPositive);
  auto* rate_qmax = rate->add_option("--q-max", opt.q_max, "End of q range")->check(kPositive);
  rate->add_option("--step", opt.step, "q range step")->check(CLI::PositiveNumber);
  rate_q->excludes(rate_qmin)->excludes(rate_qmax);
  rate_qmin->needs(rate_qmax);
  rate_qmax->needs(rate_qmin);

  auto* exact = app.add_subcommand("exact", "Exact log-probability from the certified series");
  exact->add_option("--p", opt.p)->required()->check(kOpenUnit);
  exact->add_option("--q", opt.q)->required()->check(CLI::PositiveNumber);
  exact->add_option("--n", opt.n)->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  exact->add_option("--rel-tol", opt.rel_tol)->check(CLI::Range(ldwait::series::kMinRelTol, 1.0));

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate against the exact probability");
  auto* mc_p = mc->add_option("--p", opt.p)->check(kOpenUnit);
  mc->add_option("--q", opt.q)->required()->check(CLI::PositiveNumber);
  mc->add_option("--n", opt.n)->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  mc->add_option("--samples", opt.samples)->check(CLI::Range(std::uint64_t{1}, ~std::uint64_t{0}));
  mc->add_option("--seed", opt.seed);
  mc->add_option("--streams", opt.streams)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 16));
  auto* mc_alpha = mc->add_option("--alphabet", opt.alphabet,
                                  "Full probability vector (comma separated); simulates symbols")
                       ->delimiter(',');
  mc->add_option("--marked", opt.marked, "Index of the marked symbol in --alphabet")
      ->needs(mc_alpha);
  mc_p->excludes(mc_alpha);

  auto* conv = app.add_subcommand("converge", "a_n = -log P_n / n against I_p(q)");
  conv->add_option("--p", opt.p)->required()->check(kOpenUnit);
  conv->add_option("--q", opt.q)->required()->check(CLI::PositiveNumber);
  conv->add_option("--n-max", opt.n_max)->required()->check(CLI::Range(std::int64_t{1}, ldwait::series::kMaxTableN));
  conv->add_option("--rel-tol", opt.rel_tol)->check(CLI::Range(ldwait::series::kMinRelTol, 1.0));

  auto* lap = app.add_subcommand("laplace", "Laplace asymptotic against the floor-free series");
  lap->add_option("--p", opt.p)->required()->check(kOpenUnit);
  lap->add_option("--q", opt.q)->required()->check(CLI::PositiveNumber);
  lap->add_option("--n", opt.n)->required()->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
  lap->add_option("--beta", opt.beta)->check(CLI::Range(0.5, 1.0));

  auto* plot = app.add_subcommand("plot-data", "Rate curves for several p");
  plot->add_option("--p-list", opt.p_list)->delimiter(',')->check(kOpenUnit)->capture_default_str();
  plot->add_option("--q-max", opt.q_max)->required()->check(kPositive);
  plot->add_option("--step", opt.step)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (rate->parsed()) {
      if (opt.q) {
        emit(ldwait::commands::rate_curve(opt.p, {*opt.q}), opt.format);
      } else if (opt.q_min && opt.q_max) {
        emit(ldwait::commands::rate_curve(
                 opt.p, ldwait::commands::q_grid(*opt.q_min, *opt.q_max, opt.step)),
             opt.format);
      } else {
        std::cerr << "rate: give --q or both --q-min and --q-max\n";
        return kExitUsage;
      }
    } else if (exact->parsed()) {
      emit(ldwait::commands::exact(opt.p, *opt.q, opt.n, opt.rel_tol), opt.format);
    } else if (mc->parsed()) {
      if (mc_p->count() == 0 && opt.alphabet.empty()) {
        std::cerr << "mc: give --p or --alphabet\n";
        return kExitUsage;
      }
      const auto params = opt.alphabet.empty()
                              ? ldwait::process::ProcessParams::geometric(opt.p)
                              : ldwait::process::ProcessParams::alphabet(opt.alphabet, opt.marked);
      emit(ldwait::commands::monte_carlo(params, *opt.q, opt.n, opt.samples, opt.seed,
                                         opt.streams),
           opt.format);
    } else if (conv->parsed()) {
      emit(ldwait::commands::converge(opt.p, *opt.q, opt.n_max, opt.rel_tol), opt.format);
    } else if (lap->parsed()) {
      if (!(opt.beta > 0.5 && opt.beta < 1.0)) {
        std::cerr << "laplace: --beta must lie in (0.5, 1)\n";
        return kExitUsage;
      }
      emit(ldwait::commands::laplace_check(opt.p, *opt.q, opt.n, opt.beta), opt.format);
    } else if (plot->parsed()) {
      emit(ldwait::commands::plot_data(opt.p_list, *opt.q_max, opt.step), opt.format);
    }
  } catch (const ldwait::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ldwait::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
