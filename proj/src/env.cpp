#include "sortenv/env.hpp"

#include <algorithm>
#include <string>

#include "sortenv/sorting_model.hpp"

namespace sortenv {

double perturb_observation(double input_total, double u) {
  return std::clamp(input_total * (1.0 + u), 0.0, 1.0);
}

Observation observe_input(const MaterialMix& input, const EnvConfig& cfg, Rng& rng) {
  const double u = rng.uniform(-cfg.obs_noise_level, cfg.obs_noise_level);
  Observation obs;
  obs.input_total = perturb_observation(std::clamp(input.total() / 100.0, 0.0, 1.0), u);
  if (cfg.variant == Variant::Advanced) obs.ratio_category = classify_ratio(input);
  return obs;
}

SortingEnv::SortingEnv(EnvConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      input_gen_(cfg_.input_type, Rng::derive(cfg_.seed, streams::kInput)),
      sorting_rng_(Rng::derive(cfg_.seed, streams::kSorting)),
      obs_rng_(Rng::derive(cfg_.seed, streams::kObservation)) {}

Observation SortingEnv::reset(std::optional<std::uint64_t> seed_override) {
  const std::uint64_t seed = seed_override.value_or(cfg_.seed);
  input_gen_ = InputGenerator(cfg_.input_type, Rng::derive(seed, streams::kInput));
  sorting_rng_ = Rng::derive(seed, streams::kSorting);
  obs_rng_ = Rng::derive(seed, streams::kObservation);

  state_ = EnvState{};
  state_.input = input_gen_.next();
  state_.generated_total = state_.input.total();
  started_ = true;
  return observe_input(state_.input, cfg_, obs_rng_);
}

StepResult SortingEnv::step(const Action& action) {
  if (!started_) throw ProtocolError("step called before reset");
  if (state_.done) throw ProtocolError("step called on a finished episode");
  if (!action_valid_for(action, cfg_.variant)) {
    throw ArgumentError("action (speed " + std::to_string(action.speed_index) +
                        (action.mode ? ", mode " + std::string(to_string(*action.mode)) : "") +
                        ") is not valid for the " + std::string(to_string(cfg_.variant)) +
                        " variant");
  }

  // 1. Sort the machine contents with the accuracy they were assigned on the belt.
  state_.storage += sort_transfer(state_.machine, state_.machine_accuracy).tally;
  state_.machine = {};

  // 2. Shift stages and draw new input.
  state_.machine = state_.belt;
  state_.machine_accuracy = state_.belt_accuracy;
  state_.belt = state_.input;
  state_.input = input_gen_.next();
  state_.generated_total += state_.input.total();

  // 3. Apply the action.
  const bool speed_changed =
      state_.prev_speed_index.has_value() && *state_.prev_speed_index != action.speed_index;
  state_.speed_index = action.speed_index;
  state_.mode = action.mode.value_or(SortingMode::Basic);

  // 4. Accuracy for the material now on the belt.
  const double occ = occupancy(state_.belt);
  bool mode_correct = true;
  double accuracy = 0.0;
  if (cfg_.variant == Variant::Basic) {
    accuracy = base_accuracy(state_.speed_index, occ, cfg_.limits, cfg_.lambda,
                             cfg_.base_noise_range, sorting_rng_);
  } else {
    const SortingMode correct = classify_ratio(state_.belt);
    mode_correct = state_.mode == correct;
    const double alpha = pre_noise_accuracy(state_.speed_index, occ, cfg_.limits, cfg_.lambda);
    accuracy = apply_mode(alpha, state_.mode, correct, cfg_.correct_mode_noise_range,
                          cfg_.incorrect_mode_noise_range, sorting_rng_);
  }
  state_.belt_accuracy = accuracy;

  // 5. Reward.
  const double v = speed_fraction(state_.speed_index);
  StepResult result;
  result.reward = step_reward(accuracy, v, cfg_, speed_changed);
  state_.prev_speed_index = state_.speed_index;

  // 6. Observe the new input.
  result.observation = observe_input(state_.input, cfg_, obs_rng_);

  ++state_.step_count;
  state_.done = state_.step_count >= cfg_.episode_length;
  result.done = state_.done;
  result.info.accuracy = accuracy;
  result.info.occupancy = occ;
  result.info.speed = v;
  result.info.purity = purity(state_.storage);
  result.info.mode_correct = mode_correct;
  result.info.speed_index = state_.speed_index;
  result.info.mode = action.mode;
  return result;
}

double SortingEnv::accounted_total() const {
  return state_.input.total() + state_.belt.total() + state_.machine.total() +
         state_.storage.total();
}

}  // namespace sortenv
