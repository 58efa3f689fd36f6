#pragma once

#include "hitchin/common.hpp"
#include "hitchin/elliptic_classical.hpp"
#include "hitchin/elliptic_quantum.hpp"
#include "hitchin/euler_diff_op.hpp"
#include "hitchin/io.hpp"
#include "hitchin/lie.hpp"
#include "hitchin/partial_fractions.hpp"
#include "hitchin/random.hpp"
#include "hitchin/rational_classical.hpp"
#include "hitchin/rational_quantum.hpp"
#include "hitchin/theta.hpp"
#include "hitchin/theta_expr.hpp"
#include "hitchin/theta_identities.hpp"
