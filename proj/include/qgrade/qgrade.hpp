#pragma once

#include "qgrade/errors.hpp"
#include "qgrade/param_grading.hpp"
#include "qgrade/fock_rep.hpp"
#include "qgrade/word_algebra.hpp"
#include "qgrade/graded_bracket.hpp"
#include "qgrade/report.hpp"
#include "qgrade/susy_models.hpp"
#include "qgrade/partner_solver.hpp"
#include "qgrade/cli_reports.hpp"
