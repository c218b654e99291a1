#include "seclend/path_sim.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "seclend/dejd.hpp"
#include "seclend/intensity.hpp"

namespace seclend {

namespace {

struct NullRecorder {
    void increment(double) {}
    void intensity(double) {}
};

struct FullRecorder {
    PathSample* out;
    void increment(double dx) { out->log_return_path.push_back(dx); }
    void intensity(double lam) { out->intensity_path.push_back(lam); }
};

/// The single stepper both the one-path API and the block simulator run, so
/// the two consume the stream identically. Distribution objects are local:
/// the cached second normal deviate must not leak across paths.
template <typename Recorder>
std::optional<DefaultRecord> step_path(const DejdParams& dejd, const CreditParams& credit,
                                       const SimulationGrid& grid, std::mt19937_64& rng,
                                       Recorder& rec) {
    const double dt = 1.0 / kBusinessDaysPerYear;
    const int n_steps = grid.steps();

    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> unit_exp(1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double jump_mean = dejd.lambda_a * dt;
    std::poisson_distribution<int> pois(jump_mean > 0.0 ? jump_mean : 1.0);

    const double threshold = unit_exp(rng);
    const double rho = credit.rho;
    const double rho_c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const double sq_dt = std::sqrt(dt);
    const double ou_decay = std::exp(-credit.k * dt);
    const double ou_sd = ou_transition_sd(credit, dt);

    // One day of the asset: shared Brownian drives the rho-weighted diffusion.
    auto asset_day = [&](double z_shared) {
        const double z_idio = normal(rng);
        double jumps = 0.0;
        if (jump_mean > 0.0) {
            const int nj = pois(rng);
            for (int j = 0; j < nj; ++j) {
                if (u01(rng) < dejd.p_u)
                    jumps += unit_exp(rng) / dejd.eta;
                else
                    jumps -= unit_exp(rng) / dejd.theta;
            }
        }
        return dejd.mu * dt + dejd.sigma_a * sq_dt * (rho * z_shared + rho_c * z_idio) + jumps;
    };

    double y = credit.y0;
    double compensator = 0.0;
    double x = 0.0;
    int default_step = -1;

    for (int i = 0; i < n_steps; ++i) {
        const double lam = std::exp(y); // left-point intensity
        rec.intensity(lam);
        const double z_shared = normal(rng);
        const double dx = asset_day(z_shared);
        x += dx;
        rec.increment(dx);
        y = credit.ybar + (y - credit.ybar) * ou_decay + ou_sd * z_shared;
        compensator += lam * dt;
        if (compensator >= threshold) {
            default_step = i;
            break;
        }
    }
    if (default_step < 0)
        return std::nullopt;

    DefaultRecord d;
    d.tau = (default_step + 1) * dt;
    d.growth = std::exp(x);
    // The intensity path is no longer needed; the asset continues through the
    // MPR window with fresh draws under the same correlated scheme.
    double mpr_x = 0.0;
    for (int i = 0; i < grid.mpr_days; ++i) {
        const double z_shared = normal(rng);
        const double dx = asset_day(z_shared);
        mpr_x += dx;
        rec.increment(dx);
    }
    d.mpr_gross = std::exp(mpr_x);
    return d;
}

void run_blocks(std::size_t n_blocks, int workers, const std::function<void(std::size_t)>& body) {
    int n_threads = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n_blocks)));
    if (n_threads == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            body(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= n_blocks)
                    return;
                body(b);
            }
        });
    for (auto& th : pool)
        th.join();
}

} // namespace

PathSample sample_joint_path(const DejdParams& dejd, const CreditParams& credit,
                             const SimulationGrid& grid, std::mt19937_64& rng) {
    PathSample out;
    FullRecorder rec{&out};
    if (auto d = step_path(dejd, credit, grid, rng, rec)) {
        out.default_time = d->tau;
        out.mpr_log_return = std::log(d->mpr_gross);
    }
    return out;
}

JointExposures simulate_joint_exposures(const DejdParams& dejd, const CreditParams& credit,
                                        const SimulationGrid& grid, std::size_t n_paths,
                                        std::uint64_t seed, int workers) {
    require_valid(dejd);
    require_valid(credit);
    if (n_paths == 0)
        throw std::invalid_argument("simulate_joint_exposures: n_paths must be >= 1");

    const std::size_t n_blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
    std::vector<std::vector<DefaultRecord>> per_block(n_blocks);
    run_blocks(n_blocks, workers, [&](std::size_t b) {
        auto rng = make_substream(seed, b);
        const std::size_t begin = b * kPathsPerBlock;
        const std::size_t end = std::min(begin + kPathsPerBlock, n_paths);
        NullRecorder rec;
        for (std::size_t i = begin; i < end; ++i)
            if (auto d = step_path(dejd, credit, grid, rng, rec))
                per_block[b].push_back(*d);
    });

    JointExposures out;
    out.path_count = n_paths;
    out.seed_descriptor = SeedDescriptor{seed, kPathsPerBlock, n_blocks};
    out.grid = grid;
    std::size_t total = 0;
    for (const auto& blk : per_block)
        total += blk.size();
    out.defaults.reserve(total);
    for (const auto& blk : per_block)
        out.defaults.insert(out.defaults.end(), blk.begin(), blk.end());
    return out;
}

IndependentExposures simulate_mpr_returns(const DejdParams& dejd, int mpr_days,
                                          std::size_t n_paths, std::uint64_t seed, int workers) {
    require_valid(dejd);
    if (mpr_days < 1)
        throw std::invalid_argument("simulate_mpr_returns: mpr_days must be >= 1");
    if (n_paths == 0)
        throw std::invalid_argument("simulate_mpr_returns: n_paths must be >= 1");

    const double u = business_days_to_years(mpr_days);
    const std::size_t n_blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
    IndependentExposures out;
    out.path_count = n_paths;
    out.seed_descriptor = SeedDescriptor{seed, kPathsPerBlock, n_blocks};
    out.mpr_years = u;
    out.gross_returns.resize(n_paths);
    run_blocks(n_blocks, workers, [&](std::size_t b) {
        auto rng = make_substream(seed, b);
        const std::size_t begin = b * kPathsPerBlock;
        const std::size_t end = std::min(begin + kPathsPerBlock, n_paths);
        for (std::size_t i = begin; i < end; ++i)
            out.gross_returns[i] = std::exp(sample_dejd_increment(dejd, u, rng));
    });
    return out;
}

} // namespace seclend
