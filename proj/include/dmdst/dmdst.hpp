#pragma once

#include "dmdst/augmenting.hpp"
#include "dmdst/certificate.hpp"
#include "dmdst/config.hpp"
#include "dmdst/generators.hpp"
#include "dmdst/graph.hpp"
#include "dmdst/improvement.hpp"
#include "dmdst/local_search.hpp"
#include "dmdst/oracle.hpp"
#include "dmdst/report.hpp"
#include "dmdst/solve.hpp"
#include "dmdst/tree.hpp"
