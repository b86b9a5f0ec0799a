#pragma once

#include <cstdint>
#include <vector>

#include "gwshm/signal_model.hpp"

namespace gwshm {

// Noise recipe for one augmentation run. pink_fraction is the share of total
// noise power carried by pink (1/f) noise; snr_db = +infinity disables noise.
struct NoiseSpec {
    double snr_db = 20.0;
    double pink_fraction = 0.5;
    int copies = 50;
};

// Peak normalization to [-1, 1]; runs before noise augmentation and feature
// extraction. Throws DegenerateInput on an all-zero record.
GwRecord normalize(const GwRecord& record);

// Zero-mean Gaussian samples; sample variance converges to `power`.
std::vector<double> white_noise(std::size_t n, double power, std::uint64_t seed);

// Zero-mean 1/f noise by FFT spectral shaping (white spectrum x 1/sqrt(f),
// DC zeroed, inverse transform, exact rescale to `power`).
std::vector<double> pink_noise(std::size_t n, double power, std::uint64_t seed);

// Adds the white/pink mixture so the realized noise power equals
// signal_power / 10^(snr_db/10); signal power is measured over the full
// record. The input must be clean (noise_copy 0) and normalized.
GwRecord add_noise_at_snr(const GwRecord& record, const NoiseSpec& spec, std::uint64_t seed,
                          int copy_index = 1);

// spec.copies noisy copies per input record, record-major order. Per-copy
// seeds derive from (seed, record index, copy index), so parallel schedules
// cannot change the output.
std::vector<GwRecord> augment_dataset(const std::vector<GwRecord>& records, const NoiseSpec& spec,
                                      std::uint64_t seed);

double mean_square(const std::vector<double>& samples);

}  // namespace gwshm
