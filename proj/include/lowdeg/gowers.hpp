#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "boolean_function.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace lowdeg
{

/*! \brief Default cap on table reads for exact enumeration routines. */
inline constexpr std::uint64_t default_operation_budget = std::uint64_t{ 1 } << 32;

/*! \brief Monte-Carlo estimate of a Gowers norm.

  `raw_mean` estimates ||f||_{U_d}^{2^d}, the unbiased primitive; the norm
  `value` is max(raw_mean, 0)^{1/2^d}.
*/
struct GowersEstimate
{
  unsigned d = 0;
  double value = 0;
  double raw_mean = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool std_error_available = false;
};

namespace detail
{

inline std::uint64_t saturating_mul( std::uint64_t a, std::uint64_t b )
{
  if ( a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a )
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

/*! Sum of W(alpha)^4 over the integer spectrum of g, divided by 2^{4n}. */
inline double fourth_moment( BooleanFunction const& g )
{
  auto const n = g.num_vars();
  double s = 0;
  if ( n <= 15 )
  {
    auto const w = walsh_spectrum<std::int32_t>( g );
    std::int64_t acc = 0;
    for ( auto const c : w )
    {
      auto const sq = static_cast<std::int64_t>( c ) * c;
      acc += sq * sq;
    }
    s = static_cast<double>( acc );
  }
  else
  {
    auto const w = walsh_spectrum<double>( g );
    for ( auto const c : w )
      s += c * c * c * c;
  }
  return std::ldexp( s, -4 * static_cast<int>( n ) );
}

/*! ||f||_{U_4}^{16}: the sum over ordered direction pairs only depends on
  their span, so each 2-dimensional subspace is visited once. */
inline double gowers_power4( BooleanFunction const& f )
{
  auto const n = f.num_vars();
  auto const points = f.num_points();
  double subspace_sum = parallel_reduce(
      points, 0.0,
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        double s = 0;
        for ( std::uint64_t a = std::max<std::uint64_t>( lo, 1 ); a < hi; ++a )
        {
          auto const fa = derivative( f, a );
          for ( std::uint64_t b = a + 1; b < points; ++b )
            if ( b < ( a ^ b ) )
              s += fourth_moment( derivative( fa, b ) );
        }
        return s;
      },
      []( double x, double y ) { return x + y; } );
  auto const degenerate = 3.0 * static_cast<double>( points ) - 2.0;
  return std::ldexp( degenerate + 6.0 * subspace_sum, -2 * static_cast<int>( n ) );
}

} // namespace detail

/*! \brief Estimated table reads for gowers_power_exact(f, d) at n variables. */
inline std::uint64_t gowers_exact_cost( unsigned n, unsigned d )
{
  auto const points = std::uint64_t{ 1 } << n;
  if ( d <= 1 )
    return points;
  if ( d == 2 )
    return detail::saturating_mul( n, points );
  return detail::saturating_mul( points, gowers_exact_cost( n, d - 1 ) );
}

/*! \brief ||f||_{U_2}^4 = sum_alpha f^(alpha)^4, reported as the norm ||f||_{U_2}. */
inline double u2_via_spectrum( BooleanFunction const& f )
{
  return std::pow( detail::fourth_moment( f ), 0.25 );
}

/*! \brief ||f||_{U_3}^8 = E_y sum_alpha f_y^(alpha)^4, reported as the norm ||f||_{U_3}.

  Costs 2^n transforms of size 2^n.
*/
inline double u3_power_via_derivative_spectra( BooleanFunction const& f )
{
  auto const points = f.num_points();
  double total = parallel_reduce(
      points, 0.0,
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        double s = 0;
        for ( std::uint64_t y = lo; y < hi; ++y )
          s += detail::fourth_moment( derivative( f, y ) );
        return s;
      },
      []( double x, double y ) { return x + y; } );
  return std::ldexp( total, -static_cast<int>( f.num_vars() ) );
}

inline double u3_via_derivative_spectra( BooleanFunction const& f )
{
  return std::pow( std::max( 0.0, u3_power_via_derivative_spectra( f ) ), 0.125 );
}

/*! \brief Exact ||f||_{U_d}^{2^d}.

  d = 1 is (E f)^2, d = 2 and d = 3 use the spectral identities, d >= 4
  recurses through ||f||_{U_d}^{2^d} = E_y ||f_y||_{U_{d-1}}^{2^{d-1}}.
  Throws resource_error when gowers_exact_cost exceeds `budget`.
*/
inline double gowers_power_exact( BooleanFunction const& f, unsigned d,
                                  std::uint64_t budget = default_operation_budget )
{
  if ( d < 1 )
    throw input_error( "Gowers norm order must be at least 1" );
  auto const cost = gowers_exact_cost( f.num_vars(), d );
  if ( cost > budget )
    throw resource_error( "exact U_" + std::to_string( d ) + " at n=" + std::to_string( f.num_vars() ) +
                          " needs ~" + std::to_string( cost ) + " table reads, over the budget of " +
                          std::to_string( budget ) + "; use gowers_norm_estimate" );
  switch ( d )
  {
  case 1:
  {
    auto const m = f.mean();
    return m * m;
  }
  case 2:
    return detail::fourth_moment( f );
  case 3:
    return u3_power_via_derivative_spectra( f );
  case 4:
    return detail::gowers_power4( f );
  default:
  {
    double s = 0;
    for ( std::uint64_t y = 0; y < f.num_points(); ++y )
      s += gowers_power_exact( derivative( f, y ), d - 1, std::numeric_limits<std::uint64_t>::max() );
    return std::ldexp( s, -static_cast<int>( f.num_vars() ) );
  }
  }
}

/*! \brief Exact ||f||_{U_d}. For d = 1 this is the seminorm |E f|. */
inline double gowers_norm_exact( BooleanFunction const& f, unsigned d,
                                 std::uint64_t budget = default_operation_budget )
{
  auto const p = gowers_power_exact( f, d, budget );
  return std::pow( std::max( 0.0, p ), 1.0 / std::ldexp( 1.0, static_cast<int>( d ) ) );
}

/*! \brief One sample of the order-d derivative: f_{y_1..y_d}(x) as a sign bit. */
inline bool sample_derivative_bit( BooleanFunction const& f, unsigned d, RandomStream& rng )
{
  auto const n = f.num_vars();
  auto const x = rng.bits( n );
  std::uint64_t ys[32];
  for ( unsigned i = 0; i < d; ++i )
    ys[i] = rng.bits( n );
  // Gray-code walk over all subset sums
  bool acc = f.bit( x );
  auto point = x;
  for ( std::uint64_t k = 1; k < ( std::uint64_t{ 1 } << d ); ++k )
  {
    point ^= ys[std::countr_zero( k )];
    acc ^= f.bit( point );
  }
  return acc;
}

namespace detail
{

/*! Mean and standard error of +-1 samples given the count of -1s. */
inline std::pair<double, double> sign_sample_stats( std::uint64_t trials, std::uint64_t minus )
{
  auto const t = static_cast<double>( trials );
  auto const mean = ( t - 2.0 * static_cast<double>( minus ) ) / t;
  if ( trials < 2 )
    return { mean, 0.0 };
  auto const var = std::max( 0.0, ( 1.0 - mean * mean ) * t / ( t - 1.0 ) );
  return { mean, std::sqrt( var / t ) };
}

} // namespace detail

/*! \brief Monte-Carlo estimate of ||f||_{U_d}; trial i draws from stream (seed, i). */
inline GowersEstimate gowers_norm_estimate( BooleanFunction const& f, unsigned d, std::uint64_t trials,
                                            std::uint64_t seed )
{
  if ( d < 1 || d > 32 )
    throw input_error( "Gowers norm order must be in [1, 32]" );
  if ( trials < 1 )
    throw input_error( "trials must be at least 1" );
  auto const minus = parallel_reduce(
      trials, std::uint64_t{ 0 },
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        std::uint64_t c = 0;
        for ( auto t = lo; t < hi; ++t )
        {
          RandomStream rng( seed, t );
          c += sample_derivative_bit( f, d, rng );
        }
        return c;
      },
      []( std::uint64_t a, std::uint64_t b ) { return a + b; } );
  auto const [mean, se] = detail::sign_sample_stats( trials, minus );
  GowersEstimate e;
  e.d = d;
  e.raw_mean = mean;
  e.std_error = se;
  e.trials = trials;
  e.seed = seed;
  e.std_error_available = trials >= 2;
  e.value = std::pow( std::max( 0.0, mean ), 1.0 / std::ldexp( 1.0, static_cast<int>( d ) ) );
  return e;
}

} // namespace lowdeg
