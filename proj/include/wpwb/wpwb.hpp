// Umbrella header.
#pragma once

#include "wpwb/answer.hpp"
#include "wpwb/ast.hpp"
#include "wpwb/capacity.hpp"
#include "wpwb/continuation.hpp"
#include "wpwb/env.hpp"
#include "wpwb/errors.hpp"
#include "wpwb/eval.hpp"
#include "wpwb/exec.hpp"
#include "wpwb/float_format.hpp"
#include "wpwb/float_value.hpp"
#include "wpwb/parse.hpp"
#include "wpwb/prevision.hpp"
#include "wpwb/print.hpp"
#include "wpwb/rational.hpp"
#include "wpwb/real_value.hpp"
#include "wpwb/sampling.hpp"
#include "wpwb/wp.hpp"
