#ifndef SQZ_SQZ_HPP
#define SQZ_SQZ_HPP

// Umbrella header for the squeezing-function estimation toolkit.

#include "sqz/types.hpp"
#include "sqz/hermitian_polynomial.hpp"
#include "sqz/domain.hpp"
#include "sqz/jet.hpp"
#include "sqz/normal_form.hpp"
#include "sqz/disc.hpp"
#include "sqz/kobayashi.hpp"
#include "sqz/squeezing.hpp"
#include "sqz/spec_parser.hpp"
#include "sqz/io.hpp"

#endif  // SQZ_SQZ_HPP
