#pragma once

#include "idbounds/levy_model.hpp"
#include "idbounds/rng.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace idbounds {

struct RngSpec {
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
};

// Replicates are grouped in fixed chunks; chunk j draws from the engine keyed
// by (seed, stream, j), so the output does not depend on the worker count.
inline constexpr std::size_t kChunk = 1024;

struct SimOptions {
    int threads = 0; // 0: hardware concurrency
};

struct SampleBatch {
    std::vector<double> values; // count * dim, row-major
    int dim = 1;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::string sampler;
    std::map<std::string, std::string> params;
    std::vector<std::uint32_t> jump_counts; // filled by sample_id_compound

    double at(std::size_t i, int d = 0) const { return values[i * dim + d]; }
    std::vector<double> column(int d) const;
    std::vector<double> norms() const; // Euclidean norm per replicate
};

// Runs fn(chunk_index, first, last) over [0, count) split in kChunk blocks.
void parallel_chunks(std::size_t count, const SimOptions& opt,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// 1/2 sum a_k (Z_k^2 - 1). The remainder check applies when a remainder is known.
SampleBatch sample_chaos2(const std::vector<double>& eigs, std::size_t count, const RngSpec& rng,
                          double remainder_sq = 0.0, double tolerance = 1e-8, const SimOptions& opt = {});
SampleBatch sample_chaos2(const EigenGenerator& gen, int N, std::size_t count, const RngSpec& rng,
                          double tolerance = 1e-8, const SimOptions& opt = {});

// Trapezoidal integral of B^2 (or (B - mean B)^2) minus its expectation.
SampleBatch sample_brownian_quadratic(EigenKind kind, double T, int steps, std::size_t count, const RngSpec& rng,
                                      const SimOptions& opt = {});

SampleBatch sample_levy_area(double T, int steps, std::size_t count, const RngSpec& rng, const SimOptions& opt = {});

enum class Spherical { uniform, axes, custom };

struct StableSampler {
    double alpha = 1.5;
    double sigma_total = 1.0;
    int n = 1;
    Spherical spherical = Spherical::uniform;
    // custom: unit directions (n entries each) with nonnegative weights
    std::vector<std::vector<double>> directions;
    std::vector<double> weights;
    bool allow_alpha_one = true;
};

// Scale of the one-dimensional stable law whose Levy measure has total mass
// sigma on a half-line (or split over both); alpha = 1 gives the pi/2 factor.
double stable_scale(double alpha, double sigma);
// Chambers-Mallows-Stuck draw of S_alpha(1, beta, 0).
double stable_standard(double alpha, double beta, Xoshiro256& g);

SampleBatch sample_stable(const StableSampler& s, std::size_t count, const RngSpec& rng, const SimOptions& opt = {});

struct CompoundOptions {
    bool gauss_smalljump = false;
    double max_rate = 1e7;
};

// One-dimensional compound-Poisson realization above eps; radial models are
// taken symmetric on the line.
SampleBatch sample_id_compound(const LevyModel& m, double eps, std::size_t count, const RngSpec& rng,
                               const CompoundOptions& copt = {}, const SimOptions& opt = {});

// Flat binary (magic, header JSON, doubles) and CSV with a commented header.
void write_batch_csv(const SampleBatch& b, const std::string& path);
void write_batch_binary(const SampleBatch& b, const std::string& path);
SampleBatch read_batch_csv(const std::string& path);
SampleBatch read_batch_binary(const std::string& path);

} // namespace idbounds
