#include "jumpbreak/simulator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "jumpbreak/rng.hpp"

namespace jumpbreak {

void validate(const ProcessSpec& spec) {
    if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw std::invalid_argument("sigma must be finite and nonnegative");
    if (!std::isfinite(spec.drift)) throw std::invalid_argument("drift must be finite");
    if (spec.jump_post.has_value() != spec.theta0.has_value()) {
        throw std::invalid_argument("jump_post and theta0 must be set together");
    }
    if (spec.theta0 && !(*spec.theta0 > 0.0 && *spec.theta0 < 1.0)) {
        throw std::invalid_argument("theta0 must lie in (0,1)");
    }
}

void validate(const IncrementSeries& series) {
    if (!(series.delta_n > 0.0) || !std::isfinite(series.delta_n)) throw std::invalid_argument("delta_n must be positive");
    if (series.values.size() < 2) throw std::invalid_argument("need at least two increments");
}

double default_eps_sim(double grid_eps) {
    if (!(grid_eps > 0.0)) throw std::domain_error("grid eps must be positive");
    return 1e-4 * std::min(1.0, grid_eps);
}

namespace {

// One jump-part increment over a window of length dt.
double jump_increment(const JumpModel& model, double dt, const SamplerConfig& cfg, Rng& rng) {
    if (cfg.method == JumpSampler::exact_stable) {
        // Subordinator increment law on the beta family: (beta dt^2/2)/Z^2.
        const double c = model.beta() * dt * dt / 2.0;
        double z;
        do {
            z = rng.normal();
        } while (z == 0.0);
        return c / (z * z);
    }
    const double lambda = model.tail(cfg.eps_sim) * dt;
    const std::uint64_t count = rng.poisson(lambda);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
        sum += model.conditional_quantile(cfg.eps_sim, rng.uniform01());
    }
    if (cfg.compensate_small) sum += model.small_jump_mean(cfg.eps_sim) * dt;
    return sum;
}

void check_sampler(const ProcessSpec& spec, const SamplerConfig& cfg) {
    const bool all_beta = spec.jump_pre.is_beta_family() &&
                          (!spec.jump_post || spec.jump_post->is_beta_family());
    if (cfg.method == JumpSampler::exact_stable && !all_beta) {
        throw std::domain_error("exact-stable sampling requires beta-family jump measures");
    }
    if (cfg.method == JumpSampler::truncated_cp) {
        if (!(cfg.eps_sim > 0.0)) throw std::domain_error("eps_sim must be positive");
        if (cfg.compensate_small && !all_beta) {
            throw std::domain_error("small-jump compensation requires beta-family jump measures");
        }
    }
}

}  // namespace

std::string to_string(JumpSampler method) {
    switch (method) {
        case JumpSampler::truncated_cp: return "truncated-cp";
        case JumpSampler::exact_stable: return "exact-stable";
    }
    throw std::logic_error("unknown jump sampler");
}

JumpSampler parse_jump_sampler(const std::string& name) {
    if (name == "truncated-cp") return JumpSampler::truncated_cp;
    if (name == "exact-stable") return JumpSampler::exact_stable;
    throw std::invalid_argument("unknown jump sampler: " + name);
}

IncrementSeries simulate_path(const ProcessSpec& spec, std::size_t n, double delta_n,
                              const SamplerConfig& cfg) {
    validate(spec);
    if (n < 2) throw std::invalid_argument("need at least two increments");
    if (!(delta_n > 0.0) || !std::isfinite(delta_n)) throw std::invalid_argument("delta_n must be positive");
    check_sampler(spec, cfg);

    // Break position: increments 1..floor(n theta0) use jump_pre.
    const std::size_t pre_count =
        spec.has_break() ? static_cast<std::size_t>(std::floor(static_cast<double>(n) * *spec.theta0)) : n;

    Rng rng(cfg.seed);
    IncrementSeries out;
    out.delta_n = delta_n;
    out.values.resize(n);
    const double sqrt_dn = std::sqrt(delta_n);
    for (std::size_t j = 0; j < n; ++j) {
        double v = spec.drift * delta_n;
        if (spec.sigma != 0.0) v += spec.sigma * sqrt_dn * rng.normal();
        const JumpModel& model = (j < pre_count) ? spec.jump_pre : *spec.jump_post;
        v += jump_increment(model, delta_n, cfg, rng);
        out.values[j] = v;
    }
    return out;
}

TailProbe small_time_tail_probability(const ProcessSpec& spec, double t, double z,
                                      std::size_t reps, std::uint64_t seed) {
    validate(spec);
    if (spec.has_break()) throw std::invalid_argument("small-time probe needs a no-break spec");
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (!(z > 0.0)) throw std::domain_error("z must be positive");
    if (reps == 0) throw std::invalid_argument("reps must be positive");

    SamplerConfig cfg;
    if (spec.jump_pre.is_beta_family()) {
        cfg.method = JumpSampler::exact_stable;
    } else {
        cfg.method = JumpSampler::truncated_cp;
        cfg.eps_sim = default_eps_sim(z);
        cfg.compensate_small = false;
    }
    return small_time_tail_probability(spec, t, z, reps, seed, cfg);
}

TailProbe small_time_tail_probability(const ProcessSpec& spec, double t, double z,
                                      std::size_t reps, std::uint64_t seed,
                                      const SamplerConfig& cfg) {
    validate(spec);
    if (spec.has_break()) throw std::invalid_argument("small-time probe needs a no-break spec");
    if (!(t > 0.0)) throw std::domain_error("t must be positive");
    if (!(z > 0.0)) throw std::domain_error("z must be positive");
    if (reps == 0) throw std::invalid_argument("reps must be positive");
    check_sampler(spec, cfg);
    Rng rng(seed);
    const double sqrt_t = std::sqrt(t);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        double v = spec.drift * t;
        if (spec.sigma != 0.0) v += spec.sigma * sqrt_t * rng.normal();
        v += jump_increment(spec.jump_pre, t, cfg, rng);
        if (v >= z) ++hits;
    }
    TailProbe probe;
    probe.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
    probe.se = std::sqrt(probe.p_hat * (1.0 - probe.p_hat) / static_cast<double>(reps));
    return probe;
}

void write_increments_csv(const IncrementSeries& series, std::ostream& out,
                          std::uint64_t seed) {
    validate(series);
    out.precision(17);
    out << "# delta_n=" << series.delta_n << " n=" << series.values.size()
        << " seed=" << seed << '\n';
    out << "j,increment\n";
    for (std::size_t j = 0; j < series.values.size(); ++j) {
        out << (j + 1) << ',' << series.values[j] << '\n';
    }
}

namespace {

double parse_double_field(const std::string& text, std::size_t row, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing junk");
        if (std::isnan(v)) throw std::invalid_argument("nan");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("row " + std::to_string(row) + ": bad " + what + " value '" + text + "'");
    }
}

}  // namespace

IncrementSeries read_increments_csv(std::istream& in) {
    IncrementSeries series;
    bool have_delta = false;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "delta_n") {
                    series.delta_n = parse_double_field(val, row, "delta_n");
                    have_delta = true;
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "j,increment") {
                throw std::runtime_error("row " + std::to_string(row) + ": expected header 'j,increment'");
            }
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
            throw std::runtime_error("row " + std::to_string(row) + ": expected two columns");
        }
        series.values.push_back(parse_double_field(b, row, "increment"));
    }
    if (!have_delta) throw std::runtime_error("missing '# delta_n=...' metadata");
    validate(series);
    return series;
}

IncrementSeries read_increments_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open increments file: " + path);
    return read_increments_csv(in);
}

IncrementSeries series_from_prices(const std::vector<double>& times,
                                   const std::vector<double>& prices) {
    if (times.size() != prices.size()) throw std::invalid_argument("time/price length mismatch");
    if (times.size() < 3) throw std::invalid_argument("need at least three observations");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw std::invalid_argument("observation times must increase");
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double step = times[i + 1] - times[i];
        if (std::abs(step - dt) > 1e-6 * std::max(1.0, std::abs(dt))) {
            throw std::invalid_argument("observation times must be equidistant (row " + std::to_string(i + 2) + ")");
        }
    }
    IncrementSeries series;
    series.delta_n = dt;
    series.values.resize(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) series.values[i] = prices[i + 1] - prices[i];
    validate(series);
    return series;
}

IncrementSeries read_prices_csv(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    std::vector<double> t, p;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // tolerate any header naming
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
            throw std::runtime_error("row " + std::to_string(row) + ": expected two columns");
        }
        t.push_back(parse_double_field(a, row, "time"));
        p.push_back(parse_double_field(b, row, "price"));
    }
    return series_from_prices(t, p);
}

}  // namespace jumpbreak
