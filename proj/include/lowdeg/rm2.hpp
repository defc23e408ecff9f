#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>

#include "boolean_function.hpp"
#include "errors.hpp"
#include "gowers.hpp"
#include "parallel.hpp"

namespace lowdeg
{

struct RM2Distance
{
  double distance = 0;
  QuadraticPolynomial nearest{ 1 };
};

/*! \brief Distance from f to the nearest quadratic polynomial, by exhaustive search (n <= 6).

  For each quadratic part Q the best affine correction is read off the
  spectrum of f * (-1)^Q. Ties resolve to the smallest coefficient
  encoding (quadratic bits, then linear vector, then constant).
*/
inline RM2Distance rm2_exact_distance( BooleanFunction const& f )
{
  auto const n = f.num_vars();
  if ( n > 6 )
    throw resource_error( "rm2_exact_distance enumerates all quadratics and supports n <= 6, got n=" +
                          std::to_string( n ) );
  auto const forms = std::uint64_t{ 1 } << ( n * ( n - 1 ) / 2 );
  struct Best
  {
    std::int32_t magnitude = -1;
    std::uint64_t code = 0;
    std::uint64_t alpha = 0;
    bool negative = false;
  };
  auto const best = parallel_reduce(
      forms, Best{},
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        Best b;
        for ( auto code = lo; code < hi; ++code )
        {
          auto const h = from_quadratic( QuadraticPolynomial::from_quadratic_code( n, code ) );
          auto const w = walsh_spectrum( f * h );
          for ( std::uint64_t a = 0; a < w.size(); ++a )
            if ( std::abs( w[a] ) > b.magnitude )
              b = { std::abs( w[a] ), code, a, w[a] < 0 };
        }
        return b;
      },
      []( Best const& x, Best const& y ) { return y.magnitude > x.magnitude ? y : x; } );
  auto const form = QuadraticPolynomial::from_quadratic_code( n, best.code );
  std::vector<std::uint32_t> rows( n );
  for ( unsigned i = 0; i < n; ++i )
    rows[i] = form.upper_row( i );
  RM2Distance r;
  r.nearest = QuadraticPolynomial( n, rows, static_cast<std::uint32_t>( best.alpha ), best.negative );
  r.distance = ( 1.0 - std::ldexp( static_cast<double>( best.magnitude ), -static_cast<int>( n ) ) ) / 2.0;
  return r;
}

enum class DichotomyBranch
{
  far,
  near
};

inline char const* to_string( DichotomyBranch b ) { return b == DichotomyBranch::far ? "FAR" : "NEAR"; }

struct DichotomyVerdict
{
  DichotomyBranch branch = DichotomyBranch::far;
  double nu = 0;
  double delta = 0;
  double confidence = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double far_bound = 0; //!< distance lower bound implied by FAR; 0 for NEAR
  std::string near_statement;
};

/*! \brief Samples needed so that the mean of +-1 samples is within delta/2 of its
  expectation with probability `confidence` (Hoeffding). */
inline std::uint64_t dichotomy_sample_count( double delta, double confidence )
{
  return static_cast<std::uint64_t>( std::ceil( 8.0 * std::log( 2.0 / ( 1.0 - confidence ) ) / ( delta * delta ) ) );
}

/*! \brief Distance lower bound when ||f||_{U_3}^8 < 3 delta / 2.

  <f,g> = E[fg] <= ||fg||_{U_3} = ||f||_{U_3} < (3 delta / 2)^{1/8} for
  every quadratic g, and dist = (1 - <f,g>) / 2.
*/
inline double dichotomy_far_bound( double delta )
{
  return std::max( 0.0, ( 1.0 - std::pow( 1.5 * delta, 0.125 ) ) / 2.0 );
}

/*! \brief Decides between "far from every quadratic" and "correlates with some quadratic".

  Estimates nu ~ ||f||_{U_3}^8 from m third-derivative samples; NEAR when
  nu >= delta (ties included), FAR otherwise.
*/
inline DichotomyVerdict dichotomy( BooleanFunction const& f, double delta, double confidence, std::uint64_t seed )
{
  if ( !( delta > 0.0 && delta < 1.0 ) )
    throw input_error( "delta must lie in (0, 1)" );
  if ( !( confidence > 0.0 && confidence < 1.0 ) )
    throw input_error( "confidence must lie in (0, 1)" );
  auto const m = dichotomy_sample_count( delta, confidence );
  auto const est = gowers_norm_estimate( f, 3, m, seed );
  DichotomyVerdict v;
  v.nu = est.raw_mean;
  v.delta = delta;
  v.confidence = confidence;
  v.trials = m;
  v.seed = seed;
  if ( v.nu >= delta )
  {
    v.branch = DichotomyBranch::near;
    v.near_statement = "||f||_U3^8 >= delta/2 with the stated confidence; some quadratic lies at distance "
                       "strictly below 1/2";
  }
  else
  {
    v.branch = DichotomyBranch::far;
    v.far_bound = dichotomy_far_bound( delta );
  }
  return v;
}

/*! \brief Returns (<f,g>, ||f||_{U_3}^{1/2}); the first never exceeds the second. */
inline std::pair<double, double> rm2_correlation_bound_check( BooleanFunction const& f, QuadraticPolynomial const& g )
{
  auto const lhs = inner_product( f, from_quadratic( g ) );
  auto const rhs = std::sqrt( gowers_norm_exact( f, 3 ) );
  return { lhs, rhs };
}

} // namespace lowdeg
