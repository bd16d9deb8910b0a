#pragma once

#include "zentropy/anomaly.hpp"
#include "zentropy/bayes.hpp"
#include "zentropy/entropic_potential.hpp"
#include "zentropy/entropy.hpp"
#include "zentropy/error.hpp"
#include "zentropy/gridworld.hpp"
#include "zentropy/markov_model.hpp"
#include "zentropy/random.hpp"
#include "zentropy/rl_agent.hpp"
