#include "igw/cir.hpp"

#include "igw/errors.hpp"
#include "igw/parallel.hpp"
#include "igw/stats.hpp"

#include <cmath>
#include <sstream>

namespace igw {

namespace {

// Substream tags for the independent draws hanging off a path seed.
constexpr std::uint64_t kBrownianSubstream = 0;
constexpr std::uint64_t kGaussSubstream = 1;

} // namespace

void CirConfig::validate() const {
    if (!(mu0 > 0.0) || !std::isfinite(mu0))
        throw ConfigError("cir: mu0 must be > 0");
    if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
        throw ConfigError("cir: sigma0 must be >= 0");
    if (grid_size < 2) throw ConfigError("cir: grid_size must be >= 2");
}

CirPath simulate_cir(const CirConfig& cfg, SeedRecord seed) {
    cfg.validate();

    const std::size_t n = cfg.grid_size;
    const double dt = cfg.step();
    const double sqrt_dt = std::sqrt(dt);

    CirPath path;
    path.seed = seed;
    path.values.resize(n + 1);
    path.increments.resize(n);

    Rng rng(seed, kBrownianSubstream);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double y = 0.0;
    path.values[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double db = gauss(rng.engine()) * sqrt_dt;
        path.increments[k] = db;
        y = y + cfg.mu0 * dt + cfg.sigma0 * std::sqrt(std::max(y, 0.0)) * db;
        y = std::max(y, 0.0);
        path.values[k + 1] = y;
    }
    return path;
}

LimitFunctionals limit_functionals(const CirPath& path, const CirConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.grid_size;
    if (path.values.size() != n + 1 || path.increments.size() != n) {
        throw ConfigError("limit_functionals: path does not match the config grid");
    }
    const double dt = cfg.step();

    CompensatedSum y_over_s, y2_over_s, y32_db, sqrt_y_db, y_plain, y2_plain;
    for (std::size_t k = 0; k < n; ++k) {
        const double y = std::max(path.values[k], 0.0);
        y_plain.add(y * dt);
        y2_plain.add(y * y * dt);
        sqrt_y_db.add(std::sqrt(y) * path.increments[k]);
        if (k >= 1) {
            const double s = static_cast<double>(k) * dt;
            y_over_s.add(y / s * dt);
            y2_over_s.add(y * y / s * dt);
            y32_db.add(y * std::sqrt(y) / s * path.increments[k]);
        }
    }

    LimitFunctionals f;
    f.int_Y_over_s = y_over_s.value();
    f.int_Y2_over_s = y2_over_s.value();
    f.stoch_int_Y32 = cfg.sigma0 * y32_db.value();
    f.stoch_int_sqrtY = cfg.sigma0 * sqrt_y_db.value();
    f.int_Y = y_plain.value();
    f.int_Y2 = y2_plain.value();

    Rng gauss_rng(path.seed, kGaussSubstream);
    f.z_gauss = gauss_rng.normal(0.0, std::sqrt(cfg.sigma0 * cfg.sigma0 * cfg.mu0));
    return f;
}

namespace {

constexpr std::size_t kMaxResamples = 64;

/// One accepted draw for the requested law. Degenerate paths (singular 2x2
/// system) are resampled from a disjoint stream range; returns how many
/// attempts were rejected.
std::size_t draw_one(LimitLaw law, const CirConfig& cfg, SeedRecord seed,
                     std::size_t draw_index, LimitSample& out) {
    SeedRecord s{seed.master, seed.stream + draw_index};
    for (std::size_t attempt = 0; attempt < kMaxResamples; ++attempt) {
        if (law == LimitLaw::MuGauss) {
            Rng rng(s, kGaussSubstream);
            out.values[draw_index] =
                rng.normal(0.0, std::sqrt(cfg.sigma0 * cfg.sigma0 * cfg.mu0));
            return attempt;
        }

        const CirPath path = simulate_cir(cfg, s);
        const LimitFunctionals f = limit_functionals(path, cfg);
        if (law == LimitLaw::WlsSlope) {
            if (f.int_Y2_over_s > 0.0) {
                out.values[draw_index] = f.stoch_int_Y32 / f.int_Y2_over_s;
                return attempt;
            }
        } else { // OlsPair
            // [int Y^2, int Y; int Y, 1] v = [s0 int Y^{3/2} dB, s0 int sqrtY dB]
            const double det = f.int_Y2 - f.int_Y * f.int_Y;
            if (std::abs(det) > 1e-14 * std::max(1.0, f.int_Y2)) {
                const double d1 = f.stoch_int_Y32;
                const double d2 = f.stoch_int_sqrtY;
                out.values[draw_index] = (d1 - f.int_Y * d2) / det;
                out.values2[draw_index] = (f.int_Y2 * d2 - f.int_Y * d1) / det;
                return attempt;
            }
        }
        // Resample far outside the caller's stream range.
        s.stream += (attempt + 1) * 0x100000000ULL;
    }
    std::ostringstream msg;
    msg << "sample_limit_law: draw " << draw_index << " still degenerate after "
        << kMaxResamples << " resamples";
    throw DomainError(msg.str());
}

} // namespace

LimitSample sample_limit_law(LimitLaw law, const CirConfig& cfg,
                             std::size_t draws, SeedRecord seed,
                             unsigned workers) {
    cfg.validate();
    if (draws < 1) throw ConfigError("sample_limit_law: draws must be >= 1");

    LimitSample out;
    out.law = law;
    out.values.resize(draws);
    if (law == LimitLaw::OlsPair) out.values2.resize(draws);

    std::vector<std::size_t> rejects(draws, 0);
    parallel_for_index(draws, workers, [&](std::size_t i) {
        rejects[i] = draw_one(law, cfg, seed, i, out);
    });

    out.rejected = 0;
    for (std::size_t r : rejects) out.rejected += r;
    return out;
}

} // namespace igw
