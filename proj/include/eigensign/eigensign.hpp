#pragma once

// Umbrella header: recovery of eigenvector sign patterns from entrywise
// absolute values, given the matrix and the eigenvalue.

#include "eigensign/flipper.hpp"
#include "eigensign/harness.hpp"
#include "eigensign/kaczmarz.hpp"
#include "eigensign/numkit.hpp"
#include "eigensign/oracle.hpp"
#include "eigensign/problems.hpp"
#include "eigensign/random.hpp"
#include "eigensign/report.hpp"
#include "eigensign/signsys.hpp"
#include "eigensign/theory.hpp"
