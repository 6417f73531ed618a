#pragma once

#include "mpwmi/atom.hpp"
#include "mpwmi/bench/generator.hpp"
#include "mpwmi/bench/harness.hpp"
#include "mpwmi/certificate.hpp"
#include "mpwmi/error.hpp"
#include "mpwmi/factor_graph.hpp"
#include "mpwmi/io.hpp"
#include "mpwmi/messages.hpp"
#include "mpwmi/oracle/enumeration.hpp"
#include "mpwmi/oracle/monte_carlo.hpp"
#include "mpwmi/piecewise.hpp"
#include "mpwmi/polynomial.hpp"
#include "mpwmi/primal_graph.hpp"
#include "mpwmi/problem.hpp"
#include "mpwmi/query.hpp"
#include "mpwmi/report.hpp"
#include "mpwmi/rational.hpp"
#include "mpwmi/solver.hpp"
#include "mpwmi/univariate.hpp"
