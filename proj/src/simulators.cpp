#include "idbounds/simulators.hpp"

#include "idbounds/errors.hpp"

#include "json.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace idbounds {

namespace {

constexpr double kPi = std::numbers::pi;

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

SampleBatch new_batch(const std::string& sampler, std::size_t count, int dim, const RngSpec& rng) {
    SampleBatch b;
    b.sampler = sampler;
    b.count = count;
    b.dim = dim;
    b.seed = rng.seed;
    b.stream_id = rng.stream;
    b.values.assign(count * static_cast<std::size_t>(dim), 0.0);
    return b;
}

} // namespace

std::vector<double> SampleBatch::column(int d) const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i, d);
    return out;
}

std::vector<double> SampleBatch::norms() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) s += at(i, d) * at(i, d);
        out[i] = std::sqrt(s);
    }
    return out;
}

void parallel_chunks(std::size_t count, const SimOptions& opt,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    std::size_t chunks = (count + kChunk - 1) / kChunk;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t workers = opt.threads > 0 ? static_cast<std::size_t>(opt.threads) : hw;
    workers = std::min(workers, std::max<std::size_t>(chunks, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            std::size_t j = next.fetch_add(1);
            if (j >= chunks) return;
            try {
                fn(j, j * kChunk, std::min(count, (j + 1) * kChunk));
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next = chunks;
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

SampleBatch sample_chaos2(const std::vector<double>& eigs, std::size_t count, const RngSpec& rng, double remainder_sq,
                          double tolerance, const SimOptions& opt) {
    if (eigs.empty()) fail(ErrorCode::InvalidArgument, "sample_chaos2 needs N >= 1");
    if (remainder_sq > tolerance) {
        std::ostringstream os;
        os << "eigenvalue remainder " << remainder_sq << " exceeds tolerance " << tolerance;
        fail(ErrorCode::TruncationTooCoarse, os.str());
    }
    SampleBatch b = new_batch("chaos2", count, 1, rng);
    b.params["N"] = str(eigs.size());
    b.params["a_max"] = str(spectral_a(eigs));
    parallel_chunks(count, opt, [&](std::size_t j, std::size_t first, std::size_t last) {
        Xoshiro256 g(rng.seed, rng.stream, j);
        for (std::size_t i = first; i < last; ++i) {
            double s = 0.0;
            for (double a : eigs) {
                double z = g.normal();
                s += a * (z * z - 1.0);
            }
            b.values[i] = 0.5 * s;
        }
    });
    return b;
}

SampleBatch sample_chaos2(const EigenGenerator& gen, int N, std::size_t count, const RngSpec& rng, double tolerance,
                          const SimOptions& opt) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "sample_chaos2 needs N >= 1");
    SampleBatch b = sample_chaos2(generate_eigs(gen, N), count, rng, eig_sum_sq_remainder(gen, N), tolerance, opt);
    b.params["generator"] = gen.kind == EigenKind::square_norm ? "square_norm" : "sample_variance";
    b.params["T"] = str(gen.T);
    return b;
}

SampleBatch sample_brownian_quadratic(EigenKind kind, double T, int steps, std::size_t count, const RngSpec& rng,
                                      const SimOptions& opt) {
    if (steps < 100) fail(ErrorCode::InvalidArgument, "sample_brownian_quadratic needs steps >= 100");
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "T must be positive");
    SampleBatch b = new_batch("brownian_quadratic", count, 1, rng);
    b.params["kind"] = kind == EigenKind::square_norm ? "square_norm" : "sample_variance";
    b.params["T"] = str(T);
    b.params["steps"] = str(steps);
    const double dt = T / steps, sd = std::sqrt(dt);
    const double center = kind == EigenKind::square_norm ? T * T / 2.0 : T * T / 6.0;
    parallel_chunks(count, opt, [&](std::size_t j, std::size_t first, std::size_t last) {
        Xoshiro256 g(rng.seed, rng.stream, j);
        std::size_t m = last - first;
        std::vector<double> B(m, 0.0), I2(m, 0.0), I1(m, 0.0), Z(m);
        for (int k = 0; k < steps; ++k) {
            for (double& z : Z) z = g.normal();
            for (std::size_t r = 0; r < m; ++r) {
                double prev = B[r];
                double next = prev + sd * Z[r];
                I2[r] += prev * prev + next * next;
                I1[r] += prev + next;
                B[r] = next;
            }
        }
        for (std::size_t r = 0; r < m; ++r) {
            double sq = 0.5 * dt * I2[r];
            if (kind == EigenKind::sample_variance) {
                double mean = 0.5 * dt * I1[r] / T;
                sq -= T * mean * mean;
            }
            b.values[first + r] = sq - center;
        }
    });
    return b;
}

SampleBatch sample_levy_area(double T, int steps, std::size_t count, const RngSpec& rng, const SimOptions& opt) {
    if (steps < 1000) fail(ErrorCode::InvalidArgument, "sample_levy_area needs steps >= 1000");
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "T must be positive");
    SampleBatch b = new_batch("levy_area", count, 1, rng);
    b.params["T"] = str(T);
    b.params["steps"] = str(steps);
    const double sd = std::sqrt(T / steps);
    parallel_chunks(count, opt, [&](std::size_t j, std::size_t first, std::size_t last) {
        Xoshiro256 g(rng.seed, rng.stream, j);
        std::size_t m = last - first;
        std::vector<double> B1(m, 0.0), B2(m, 0.0), S(m, 0.0), Z(2 * m);
        for (int k = 0; k < steps; ++k) {
            for (double& z : Z) z = g.normal();
            const double* z1 = Z.data();
            const double* z2 = Z.data() + m;
            for (std::size_t r = 0; r < m; ++r) {
                double d1 = sd * z1[r];
                double d2 = sd * z2[r];
                // midpoint and left-point sums agree for this antisymmetric form
                S[r] += B1[r] * d2 - B2[r] * d1;
                B1[r] += d1;
                B2[r] += d2;
            }
        }
        for (std::size_t r = 0; r < m; ++r) b.values[first + r] = 0.5 * S[r];
    });
    return b;
}

double stable_scale(double alpha, double sigma) {
    if (std::abs(alpha - 1.0) < 1e-9) return sigma * kPi / 2.0;
    return std::pow(sigma * std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0) / alpha, 1.0 / alpha);
}

double stable_standard(double alpha, double beta, Xoshiro256& g) {
    double V = kPi * (g.uniform_pos() - 0.5);
    double W = g.exponential();
    if (std::abs(alpha - 1.0) < 1e-9) {
        double h = kPi / 2.0 + beta * V;
        return (2.0 / kPi) * (h * std::tan(V) - beta * std::log((kPi / 2.0) * W * std::cos(V) / h));
    }
    double t = beta * std::tan(kPi * alpha / 2.0);
    double B = std::atan(t) / alpha;
    double S = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    return S * std::sin(alpha * (V + B)) / std::pow(std::cos(V), 1.0 / alpha) *
           std::pow(std::cos(V - alpha * (V + B)) / W, (1.0 - alpha) / alpha);
}

namespace {

// gamma * S_alpha(1, beta, 0) with the alpha = 1 location term.
double stable_scaled(double alpha, double beta, double gamma, Xoshiro256& g) {
    double x = stable_standard(alpha, beta, g);
    if (std::abs(alpha - 1.0) < 1e-9) return gamma * x + (2.0 / kPi) * beta * gamma * std::log(gamma);
    return gamma * x;
}

// Positive stable with Laplace transform exp(-s^rho), rho in (0, 1).
double positive_stable(double rho, Xoshiro256& g) {
    double U = kPi * g.uniform_pos();
    double E = g.exponential();
    return std::sin(rho * U) / std::pow(std::sin(U), 1.0 / rho) *
           std::pow(std::sin((1.0 - rho) * U) / E, (1.0 - rho) / rho);
}

double sphere_abs_moment(int n, double alpha) {
    if (n == 1) return 1.0;
    return std::exp(std::lgamma(n / 2.0) + std::lgamma((alpha + 1.0) / 2.0) - 0.5 * std::log(kPi) -
                    std::lgamma((n + alpha) / 2.0));
}

} // namespace

SampleBatch sample_stable(const StableSampler& s, std::size_t count, const RngSpec& rng, const SimOptions& opt) {
    if (!(s.alpha > 0.0 && s.alpha < 2.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 2)");
    if (!(s.sigma_total > 0.0)) fail(ErrorCode::InvalidArgument, "sigma_total must be positive");
    if (s.n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
    if (std::abs(s.alpha - 1.0) < 1e-9 && !s.allow_alpha_one)
        fail(ErrorCode::UnsupportedAlpha, "alpha = 1 needs the log-corrected generator");
    const double a = s.alpha;
    const int n = s.n;
    SampleBatch b = new_batch("stable", count, n, rng);
    b.params["alpha"] = str(a);
    b.params["sigma_total"] = str(s.sigma_total);
    b.params["n"] = str(n);

    // custom directions: one totally skewed amplitude per atom of the spherical measure
    std::vector<std::vector<double>> dirs;
    std::vector<double> gammas;
    if (s.spherical == Spherical::custom) {
        b.params["spherical"] = "custom";
        if (s.directions.empty() || s.directions.size() != s.weights.size())
            fail(ErrorCode::InvalidArgument, "custom spherical law needs matching directions and weights");
        double wsum = 0.0;
        for (double w : s.weights) {
            if (w < 0.0) fail(ErrorCode::InvalidArgument, "spherical weights must be >= 0");
            wsum += w;
        }
        if (!(wsum > 0.0)) fail(ErrorCode::InvalidArgument, "spherical weights sum to zero");
        for (std::size_t j = 0; j < s.directions.size(); ++j) {
            const auto& d = s.directions[j];
            if (static_cast<int>(d.size()) != n) fail(ErrorCode::InvalidArgument, "direction dimension mismatch");
            double norm = 0.0;
            for (double v : d) norm += v * v;
            norm = std::sqrt(norm);
            if (!(norm > 0.0)) fail(ErrorCode::InvalidArgument, "zero direction");
            std::vector<double> u(d);
            for (double& v : u) v /= norm;
            if (s.weights[j] == 0.0) continue;
            dirs.push_back(u);
            gammas.push_back(stable_scale(a, s.sigma_total * s.weights[j] / wsum));
        }
    } else {
        b.params["spherical"] = s.spherical == Spherical::axes ? "axes" : "uniform";
    }
    const double g_axes = stable_scale(a, n == 1 ? s.sigma_total : s.sigma_total / n);
    const double g_iso = stable_scale(a, s.sigma_total * sphere_abs_moment(n, a));
    const bool isotropic = s.spherical == Spherical::uniform && n > 1;

    parallel_chunks(count, opt, [&](std::size_t j, std::size_t first, std::size_t last) {
        Xoshiro256 g(rng.seed, rng.stream, j);
        for (std::size_t i = first; i < last; ++i) {
            double* row = &b.values[i * static_cast<std::size_t>(n)];
            if (s.spherical == Spherical::custom) {
                for (std::size_t k = 0; k < dirs.size(); ++k) {
                    double amp = stable_scaled(a, 1.0, gammas[k], g);
                    for (int d = 0; d < n; ++d) row[d] += amp * dirs[k][static_cast<std::size_t>(d)];
                }
            } else if (isotropic) {
                // sub-Gaussian representation of the rotation-invariant law
                double A = std::sqrt(2.0 * positive_stable(a / 2.0, g)) * g_iso;
                for (int d = 0; d < n; ++d) row[d] = A * g.normal();
            } else {
                for (int d = 0; d < n; ++d) row[d] = stable_scaled(a, 0.0, g_axes, g);
            }
        }
    });
    return b;
}

namespace {

// Jump-size law of nu restricted to {|y| > eps}, as a mixture of pieces.
class JumpSampler {
public:
    JumpSampler(const LevyModel& m, double eps) {
        if (std::holds_alternative<BoundedSupport>(m))
            fail(ErrorCode::InvalidArgument, "bounded-support models carry only moments and cannot be sampled");
        if (auto* st = std::get_if<Stable>(&m)) {
            stable_alpha_ = st->alpha;
            eps_ = eps;
            rate_ = tail_mass(m, eps);
            kind_ = Kind::pareto;
        } else if (auto* q = std::get_if<QuadraticSpectral>(&m)) {
            kind_ = Kind::spectral;
            for (double a : q->eigs) {
                if (a == 0.0) continue;
                double aa = std::abs(a), sg = a > 0.0 ? 1.0 : -1.0;
                if (eps < aa) {
                    double w = 0.5 * (boost::math::expint(1, eps / aa) - boost::math::expint(1, 1.0));
                    pieces_.push_back({w, eps, aa, aa, sg, true});
                }
                double start = std::max(eps, aa);
                pieces_.push_back({0.5 * boost::math::expint(1, start / aa), start, kInf, aa, sg, false});
                compensation_ -= sg * 0.5 * aa * std::exp(-eps / aa);
            }
            build_cumulative();
        } else {
            kind_ = Kind::table;
            build_table(m, eps);
        }
    }

    double rate() const { return rate_; }
    double compensation() const { return compensation_; }

    double draw(Xoshiro256& g) const {
        switch (kind_) {
        case Kind::pareto: {
            double r = eps_ * std::pow(g.uniform_pos(), -1.0 / stable_alpha_);
            return g.uniform() < 0.5 ? r : -r;
        }
        case Kind::spectral: {
            const Piece& p = pick(g);
            for (;;) {
                if (p.log_uniform) {
                    double y = p.lo * std::exp(g.uniform() * std::log(p.hi / p.lo));
                    if (g.uniform() < std::exp(-y / p.a)) return p.sign * y;
                } else {
                    double y = p.lo + p.a * g.exponential();
                    if (g.uniform() * y < p.lo) return p.sign * y;
                }
            }
        }
        case Kind::table: {
            const Piece& p = pick(g);
            for (;;) {
                double y = p.lo * std::exp(g.uniform() * std::log(p.hi / p.lo));
                if (g.uniform() * p.a <= y * density_(y)) return g.uniform() < 0.5 ? y : -y;
            }
        }
        }
        return 0.0;
    }

private:
    struct Piece {
        double weight, lo, hi, a, sign;
        bool log_uniform;
    };
    enum class Kind { pareto, spectral, table };

    void build_cumulative() {
        rate_ = 0.0;
        for (const auto& p : pieces_) {
            rate_ += p.weight;
            cum_.push_back(rate_);
        }
        if (!(rate_ > 0.0)) fail(ErrorCode::InvalidArgument, "no mass above eps");
    }

    const Piece& pick(Xoshiro256& g) const {
        double u = g.uniform() * rate_;
        std::size_t k = static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        return pieces_[std::min(k, pieces_.size() - 1)];
    }

    // Log-spaced cells with per-cell rejection from the log-uniform proposal;
    // `a` holds an upper bound of r * density on the cell.
    void build_table(const LevyModel& m, double eps) {
        density_ = [m](double r) { return radial_density(m, r); };
        double total = tail_mass(m, eps);
        double hi = eps * 2.0;
        while (tail_mass(m, hi) > 1e-13 * total) hi *= 2.0;
        const int cells = 2048;
        double step = std::log(hi / eps) / cells;
        for (int c = 0; c < cells; ++c) {
            double lo = eps * std::exp(c * step), up = eps * std::exp((c + 1) * step);
            double w = integrate([&](double r) { return density_(r); }, lo, up, QuadOptions{1e-10, 0.0, 1 << 16});
            double peak = 0.0;
            for (int k = 0; k <= 16; ++k) {
                double r = lo * std::exp(k * step / 16.0);
                peak = std::max(peak, r * density_(r));
            }
            pieces_.push_back({w, lo, up, 1.1 * peak, 1.0, true});
        }
        build_cumulative();
    }

    Kind kind_ = Kind::pareto;
    double eps_ = 0.0, stable_alpha_ = 1.0;
    double rate_ = 0.0, compensation_ = 0.0;
    std::vector<Piece> pieces_;
    std::vector<double> cum_;
    std::function<double(double)> density_;
};

} // namespace

SampleBatch sample_id_compound(const LevyModel& m, double eps, std::size_t count, const RngSpec& rng,
                               const CompoundOptions& copt, const SimOptions& opt) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be positive");
    if (std::holds_alternative<BoundedSupport>(m))
        fail(ErrorCode::InvalidArgument, "bounded-support models carry only moments and cannot be sampled");
    double mass = tail_mass(m, eps);
    if (mass > copt.max_rate) {
        std::ostringstream os;
        os << "nu(|y| > eps) = " << mass << " exceeds the per-draw budget " << copt.max_rate;
        fail(ErrorCode::BudgetExceeded, os.str());
    }
    JumpSampler js(m, eps);
    double small_sd = 0.0;
    if (copt.gauss_smalljump) small_sd = std::sqrt(truncated_abs_moment(m, 2, eps));
    SampleBatch b = new_batch("id_compound", count, 1, rng);
    b.params["model"] = model_name(m);
    b.params["eps"] = str(eps);
    b.params["rate"] = str(js.rate());
    b.params["gauss_smalljump"] = copt.gauss_smalljump ? "true" : "false";
    b.jump_counts.assign(count, 0);
    const double comp = js.compensation();
    parallel_chunks(count, opt, [&](std::size_t j, std::size_t first, std::size_t last) {
        Xoshiro256 g(rng.seed, rng.stream, j);
        std::poisson_distribution<std::uint32_t> pois(js.rate());
        for (std::size_t i = first; i < last; ++i) {
            std::uint32_t k = pois(g);
            double v = comp;
            for (std::uint32_t l = 0; l < k; ++l) v += js.draw(g);
            if (small_sd > 0.0) v += small_sd * g.normal();
            b.values[i] = v;
            b.jump_counts[i] = k;
        }
    });
    return b;
}

namespace {

nlohmann::json batch_header(const SampleBatch& b) {
    nlohmann::json h;
    h["sampler"] = b.sampler;
    h["params"] = b.params;
    h["seed"] = b.seed;
    h["stream"] = b.stream_id;
    h["count"] = b.count;
    h["dim"] = b.dim;
    return h;
}

void apply_header(SampleBatch& b, const nlohmann::json& h) {
    b.sampler = h.at("sampler").get<std::string>();
    b.params = h.at("params").get<std::map<std::string, std::string>>();
    b.seed = h.at("seed").get<std::uint64_t>();
    b.stream_id = h.at("stream").get<std::uint64_t>();
    b.count = h.at("count").get<std::size_t>();
    b.dim = h.at("dim").get<int>();
}

constexpr char kMagic[8] = {'I', 'D', 'B', 'S', 'M', 'P', '1', '\n'};

} // namespace

void write_batch_csv(const SampleBatch& b, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    out << "# " << batch_header(b).dump() << "\n";
    for (int d = 0; d < b.dim; ++d) out << (d ? "," : "") << "v" << d;
    out << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < b.count; ++i) {
        for (int d = 0; d < b.dim; ++d) out << (d ? "," : "") << b.at(i, d);
        out << "\n";
    }
}

SampleBatch read_batch_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("# ", 0) != 0) fail(ErrorCode::InvalidArgument, path + ": missing sample header");
    SampleBatch b;
    apply_header(b, nlohmann::json::parse(line.substr(2)));
    std::getline(in, line); // column names
    b.values.reserve(b.count * static_cast<std::size_t>(b.dim));
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) b.values.push_back(std::stod(cell));
    }
    if (b.values.size() != b.count * static_cast<std::size_t>(b.dim))
        fail(ErrorCode::InvalidArgument, path + ": row count does not match header");
    return b;
}

void write_batch_binary(const SampleBatch& b, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    std::string h = batch_header(b).dump();
    std::uint64_t len = h.size();
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    out.write(reinterpret_cast<const char*>(b.values.data()), static_cast<std::streamsize>(b.values.size() * sizeof(double)));
}

SampleBatch read_batch_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) fail(ErrorCode::InvalidArgument, path + ": bad magic");
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    std::string h(len, '\0');
    in.read(h.data(), static_cast<std::streamsize>(len));
    SampleBatch b;
    apply_header(b, nlohmann::json::parse(h));
    b.values.resize(b.count * static_cast<std::size_t>(b.dim));
    in.read(reinterpret_cast<char*>(b.values.data()), static_cast<std::streamsize>(b.values.size() * sizeof(double)));
    if (!in) fail(ErrorCode::InvalidArgument, path + ": truncated sample file");
    return b;
}

} // namespace idbounds
