#pragma once

#include <stdexcept>
#include <string>

namespace lowdeg
{

/*! \brief Malformed or out-of-contract input (bad lengths, parameters, files). */
class input_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/*! \brief An exact computation would exceed its operation budget.

  The message names the limit; callers usually fall back to the
  corresponding Monte-Carlo estimator.
*/
class resource_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace lowdeg
