#ifndef DPVNE_DPVNE_HPP_
#define DPVNE_DPVNE_HPP_

#include "dpvne/baselines.hpp"
#include "dpvne/embedding.hpp"
#include "dpvne/generator.hpp"
#include "dpvne/harness.hpp"
#include "dpvne/local_control.hpp"
#include "dpvne/model.hpp"
#include "dpvne/pso.hpp"
#include "dpvne/text_format.hpp"

#endif  // DPVNE_DPVNE_HPP_
