#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "labeling.hpp"

namespace agewatch {

struct ProfileSpec {
  std::string name = "custom";
  double base_memory = 100.0;
  double leak_rate = 0.0;  // units per sample during growth segments
  std::size_t episode_length = 1000;
  double release_fraction = 1.0;  // share of accumulated growth released
  double seasonal_amplitude = 0.0;
  std::size_t seasonal_period = 720;
  double noise_std = 0.0;
  std::size_t total_samples = 20000;
  std::uint64_t rng_seed = 1;
  double sampling_interval_seconds = 5.0;
};

// Presets shaped like three stress levels: the heavier the load, the steeper
// the leak, the shorter the episode, and the faster the seasonal churn.
ProfileSpec preset_low();
ProfileSpec preset_medium();
ProfileSpec preset_high();
ProfileSpec preset_by_name(const std::string& name);

// Sawtooth leak plus seasonal sine plus Gaussian noise. Each cycle is a
// growth segment (episode_length samples, slope leak_rate, labeled 1 when
// leaking), a release ramp over episode_length/4 samples shedding
// release_fraction of the accumulated growth, and a flat idle remainder.
// Ground-truth labels come from this construction, not from trend analysis.
LabeledSeries generate_profile(const ProfileSpec& spec);

// a[0..switch_index) followed by b[switch_index..]; the b tail is shifted
// vertically to continue a's last memory value without a jump.
LabeledSeries compose_sudden(const LabeledSeries& a, const LabeledSeries& b,
                             std::size_t switch_index);

// Before `start` emits a[i]; inside the transition, position i comes from
// b[i] with a seeded Bernoulli whose probability ramps linearly to 1 over
// the transition, else from a[i]; afterwards emits the rest of b. b is
// shifted vertically to meet a where the transition opens.
LabeledSeries compose_gradual(const LabeledSeries& a, const LabeledSeries& b,
                              std::size_t start, std::size_t transition_length,
                              std::uint64_t rng_seed);

// Alternating A,B,A,B,... blocks of block_length, consuming each source
// sequentially, 2*cycles blocks in total; a final block may come up short
// when a source runs out. Each block is shifted to continue the last
// emitted memory value.
LabeledSeries compose_recurring(const LabeledSeries& a, const LabeledSeries& b,
                                std::size_t block_length, std::size_t cycles);

struct ShiftSpec {
  std::string kind = "profile";  // profile | sudden | gradual | recurring
  ProfileSpec profile_a;
  ProfileSpec profile_b;
  std::size_t switch_index = 0;
  std::size_t start = 0;
  std::size_t transition_length = 1;
  std::size_t block_length = 0;
  std::size_t cycles = 2;
  std::uint64_t seed = 1;
};

// Key-value scenario description; see README for the accepted keys.
ShiftSpec parse_shift_spec(const std::string& text);
ShiftSpec load_shift_spec(const std::string& path);

LabeledSeries build_scenario(const ShiftSpec& spec);

// Named scenarios used by the evaluation matrix.
std::vector<std::string> builtin_scenario_names();
ShiftSpec builtin_scenario(const std::string& name, std::uint64_t seed);

}  // namespace agewatch
