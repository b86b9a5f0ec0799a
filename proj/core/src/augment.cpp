#include "gwshm/augment.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "gwshm/errors.hpp"
#include "gwshm/rng.hpp"

namespace gwshm {

double mean_square(const std::vector<double>& samples) {
    double acc = 0.0;
    for (double s : samples) acc += s * s;
    return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

GwRecord normalize(const GwRecord& record) {
    double peak = 0.0;
    for (double s : record.samples) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) throw DegenerateInput("cannot normalize an all-zero record");

    GwRecord out = record;
    for (double& s : out.samples) s /= peak;
    return out;
}

std::vector<double> white_noise(std::size_t n, double power, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("noise length must be positive");
    if (power < 0.0) throw InvalidArgument("noise power must be nonnegative");
    if (power == 0.0) return std::vector<double>(n, 0.0);

    std::mt19937_64 rng(seed);
    std::vector<double> out = gaussian_sequence(n, rng);
    const double sigma = std::sqrt(power);
    for (double& s : out) s *= sigma;
    return out;
}

namespace {

// FFTW plan creation is not thread-safe; execution of a created plan is.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::vector<double> pink_noise(std::size_t n, double power, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("noise length must be positive");
    if (power < 0.0) throw InvalidArgument("noise power must be nonnegative");
    if (power == 0.0 || n == 1) return std::vector<double>(n, 0.0);

    std::mt19937_64 rng(seed);
    std::vector<double> white = gaussian_sequence(n, rng);

    const std::size_t bins = n / 2 + 1;
    double* time_buf = fftw_alloc_real(n);
    fftw_complex* freq_buf = fftw_alloc_complex(bins);

    fftw_plan fwd;
    fftw_plan inv;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), time_buf, freq_buf, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq_buf, time_buf, FFTW_ESTIMATE);
    }

    std::copy(white.begin(), white.end(), time_buf);
    fftw_execute(fwd);

    freq_buf[0][0] = 0.0;  // zero mean by construction
    freq_buf[0][1] = 0.0;
    for (std::size_t k = 1; k < bins; ++k) {
        const double gain = 1.0 / std::sqrt(static_cast<double>(k));
        freq_buf[k][0] *= gain;
        freq_buf[k][1] *= gain;
    }
    fftw_execute(inv);

    std::vector<double> out(time_buf, time_buf + n);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    fftw_free(time_buf);
    fftw_free(freq_buf);

    const double ms = mean_square(out);
    if (ms == 0.0) return std::vector<double>(n, 0.0);
    const double scale = std::sqrt(power / ms);
    for (double& s : out) s *= scale;
    return out;
}

GwRecord add_noise_at_snr(const GwRecord& record, const NoiseSpec& spec, std::uint64_t seed,
                          int copy_index) {
    if (record.noise_copy != 0)
        throw InvalidArgument("noise augmentation expects a clean record (noise_copy 0)");
    if (copy_index < 1) throw InvalidArgument("noise copy index starts at 1");
    if (spec.pink_fraction < 0.0 || spec.pink_fraction > 1.0)
        throw InvalidArgument("pink_fraction must lie in [0, 1]");

    const double signal_power = mean_square(record.samples);
    if (signal_power == 0.0) throw DegenerateInput("cannot set an SNR on a zero-power record");

    GwRecord out = record;
    out.noise_copy = copy_index;
    if (std::isinf(spec.snr_db) && spec.snr_db > 0.0) return out;  // noise disabled
    if (!std::isfinite(spec.snr_db)) throw InvalidArgument("snr_db must be finite or +inf");

    double peak = 0.0;
    for (double s : record.samples) peak = std::max(peak, std::abs(s));
    if (std::abs(peak - 1.0) > 1e-6)
        throw InvalidArgument("noise augmentation expects a normalized record (peak 1)");

    const std::size_t n = record.samples.size();
    const double noise_power = signal_power / std::pow(10.0, spec.snr_db / 10.0);
    std::vector<double> noise =
        white_noise(n, (1.0 - spec.pink_fraction) * noise_power, derive_seed(seed, 1));
    const std::vector<double> pink =
        pink_noise(n, spec.pink_fraction * noise_power, derive_seed(seed, 2));
    for (std::size_t i = 0; i < n; ++i) noise[i] += pink[i];

    // Exact power: the pink component is exact by construction, the white one
    // only statistically, so the mixture is rescaled once.
    const double realized = mean_square(noise);
    if (realized > 0.0) {
        const double scale = std::sqrt(noise_power / realized);
        for (double& s : noise) s *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) out.samples[i] += noise[i];
    return out;
}

std::vector<GwRecord> augment_dataset(const std::vector<GwRecord>& records, const NoiseSpec& spec,
                                      std::uint64_t seed) {
    if (spec.copies < 1) throw InvalidArgument("copies must be at least 1");

    std::vector<GwRecord> out;
    out.reserve(records.size() * static_cast<std::size_t>(spec.copies));
    for (std::size_t r = 0; r < records.size(); ++r) {
        for (int copy = 1; copy <= spec.copies; ++copy) {
            const std::uint64_t copy_seed =
                derive_seed(seed, r, static_cast<std::uint64_t>(copy));
            out.push_back(add_noise_at_snr(records[r], spec, copy_seed, copy));
        }
    }
    return out;
}

}  // namespace gwshm
