#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "boolean_function.hpp"
#include "errors.hpp"
#include "gf2.hpp"
#include "gowers.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace lowdeg
{

/*! \brief phi(y) = argmax_alpha |f_y^(alpha)| and weight(y) = f_y^(phi(y))^2. */
struct ChoiceFunction
{
  unsigned n = 0;
  std::vector<std::uint32_t> phi;
  std::vector<double> weight;

  double mean_weight() const
  {
    return std::accumulate( weight.begin(), weight.end(), 0.0 ) / static_cast<double>( weight.size() );
  }
};

/*! \brief Spectra of all 2^n derivatives; ties go to the smallest alpha. */
inline ChoiceFunction choice_function( BooleanFunction const& f, std::uint64_t budget = default_operation_budget )
{
  auto const n = f.num_vars();
  auto const points = f.num_points();
  if ( detail::saturating_mul( detail::saturating_mul( points, points ), n ) > budget )
    throw resource_error( "choice_function computes 2^n transforms of size 2^n; n=" + std::to_string( n ) +
                          " exceeds the budget of " + std::to_string( budget ) + " operations" );
  ChoiceFunction cf{ n, std::vector<std::uint32_t>( points ), std::vector<double>( points ) };
  parallel_blocks( points, [&]( std::uint64_t lo, std::uint64_t hi, std::uint64_t ) {
    for ( auto y = lo; y < hi; ++y )
    {
      auto const w = walsh_spectrum( derivative( f, y ) );
      std::uint64_t best = 0;
      for ( std::uint64_t a = 1; a < w.size(); ++a )
        if ( std::abs( w[a] ) > std::abs( w[best] ) )
          best = a;
      auto const c = std::ldexp( static_cast<double>( w[best] ), -static_cast<int>( n ) );
      cf.phi[y] = static_cast<std::uint32_t>( best );
      cf.weight[y] = c * c;
    }
  } );
  return cf;
}

struct LinearFit
{
  BitMatrix d;
  std::uint32_t shift = 0;      //!< z of the affine fit y -> Dy + z (0 unless shift search ran)
  std::uint64_t agreement = 0;  //!< |{y in A : phi(y) = Dy + z}|
  std::uint64_t support = 0;    //!< |A|
  double threshold = 0;
};

struct FitConfig
{
  double threshold = 0;
  unsigned restarts = 50;
  std::uint64_t seed = 0;
  bool oracle = false;       //!< exhaustive search over all n x n matrices (n <= 3)
  bool shift_search = false; //!< also fit the translation z of an affine map
};

namespace detail
{

inline std::uint64_t count_agreement( BitMatrix const& d, std::uint32_t z, std::vector<std::uint32_t> const& ys,
                                      ChoiceFunction const& cf )
{
  std::uint64_t c = 0;
  for ( auto const y : ys )
    c += ( d.apply( y ) ^ z ) == cf.phi[y];
  return c;
}

/*! D with D y_i = target(y_i) on independent y_i taken in the given order,
  and D e = 0 on the unit vectors completing the basis. */
template<class Target>
BitMatrix solve_on_basis( unsigned n, std::vector<std::uint32_t> const& order, Target&& target )
{
  EchelonBasis basis;
  std::vector<std::uint32_t> xs, images;
  for ( auto const y : order )
  {
    if ( xs.size() == n )
      break;
    if ( basis.insert( y ) )
    {
      xs.push_back( y );
      images.push_back( target( y ) );
    }
  }
  for ( unsigned i = 0; i < n && xs.size() < n; ++i )
    if ( basis.insert( 1u << i ) )
    {
      xs.push_back( 1u << i );
      images.push_back( 0u );
    }
  auto const x = BitMatrix::from_columns( n, xs );
  auto const p = BitMatrix::from_columns( n, images );
  return p * *x.inverse();
}

inline LinearFit fit_with_shift( ChoiceFunction const& cf, std::vector<std::uint32_t> const& ys, std::uint32_t z,
                                 FitConfig const& config )
{
  auto const n = cf.n;
  auto const target = [&]( std::uint32_t y ) { return cf.phi[y] ^ z; };
  LinearFit best;
  best.shift = z;
  bool have = false;
  auto consider = [&]( BitMatrix const& d ) {
    auto const a = count_agreement( d, z, ys, cf );
    if ( !have || a > best.agreement )
    {
      best.d = d;
      best.agreement = a;
      have = true;
    }
  };

  if ( config.oracle )
  {
    for ( std::uint64_t code = 0; code < ( std::uint64_t{ 1 } << ( n * n ) ); ++code )
    {
      std::vector<std::uint32_t> rows( n );
      for ( unsigned i = 0; i < n; ++i )
        rows[i] = static_cast<std::uint32_t>( ( code >> ( n * i ) ) & ( ( 1u << n ) - 1u ) );
      consider( BitMatrix( n, rows ) );
    }
    return best;
  }

  // restart 0 takes points by decreasing weight, later restarts shuffle
  auto by_weight = ys;
  std::stable_sort( by_weight.begin(), by_weight.end(),
                    [&]( auto a, auto b ) { return cf.weight[a] > cf.weight[b]; } );
  for ( unsigned r = 0; r < std::max( 1u, config.restarts ); ++r )
  {
    auto order = by_weight;
    if ( r > 0 )
    {
      RandomStream rng( config.seed, r );
      for ( std::size_t i = order.size(); i > 1; --i )
        std::swap( order[i - 1], order[rng.below( i )] );
    }
    auto d = solve_on_basis( n, order, target );
    auto agreement = count_agreement( d, z, ys, cf );
    // refit on the inliers of the current map while that helps
    for ( int round = 0; round < 4; ++round )
    {
      std::vector<std::uint32_t> inliers;
      for ( auto const y : by_weight )
        if ( ( d.apply( y ) ^ z ) == cf.phi[y] )
          inliers.push_back( y );
      for ( auto const y : order )
        if ( ( d.apply( y ) ^ z ) != cf.phi[y] )
          inliers.push_back( y );
      auto refit = solve_on_basis( n, inliers, target );
      auto const a = count_agreement( refit, z, ys, cf );
      if ( a <= agreement )
        break;
      d = refit;
      agreement = a;
    }
    consider( d );
  }
  return best;
}

} // namespace detail

/*! \brief Fits a linear map D to the choice function on A = {y : weight(y) >= threshold}.

  Each restart picks a spanning subset of A (restart 0 by decreasing
  weight, the others in a shuffled order), solves D on it, completes the
  basis with zero images and refits on inliers. The best agreement over
  all restarts wins; earlier restarts win ties. With `oracle` every D is
  tried.
*/
inline LinearFit fit_linear_map( ChoiceFunction const& cf, FitConfig const& config )
{
  std::vector<std::uint32_t> ys;
  for ( std::uint32_t y = 0; y < cf.phi.size(); ++y )
    if ( cf.weight[y] >= config.threshold )
      ys.push_back( y );
  if ( ys.empty() )
    throw input_error( "no point reaches the weight threshold " + std::to_string( config.threshold ) );
  if ( config.oracle && cf.n > 3 )
    throw resource_error( "oracle mode enumerates 2^(n^2) matrices and supports n <= 3" );

  LinearFit best;
  bool have = false;
  auto const shifts = config.shift_search ? ( std::uint64_t{ 1 } << cf.n ) : std::uint64_t{ 1 };
  for ( std::uint64_t z = 0; z < shifts; ++z )
  {
    auto fit = detail::fit_with_shift( cf, ys, static_cast<std::uint32_t>( z ), config );
    if ( !have || fit.agreement > best.agreement )
    {
      best = std::move( fit );
      have = true;
    }
  }
  best.support = ys.size();
  best.threshold = config.threshold;
  return best;
}

struct Symmetrization
{
  BitMatrix s;                        //!< symmetric, equal to D on U
  BitMatrix b;                        //!< symmetric zero-diagonal, equal to S on the complement of diag(S)
  std::vector<std::uint32_t> u_basis; //!< basis of U = {x : Dx = D^t x}
  std::uint32_t diagonal = 0;         //!< diagonal of S
};

namespace detail
{

/*! Symmetric X with X p_j = images[j] for j < fixed and <p_i, X p_j> = 0
  on the remaining block, in the basis p (columns of P). */
inline BitMatrix symmetric_from_basis( unsigned n, std::vector<std::uint32_t> const& p,
                                       std::vector<std::uint32_t> const& images, std::size_t fixed )
{
  BitMatrix m( n, n );
  for ( std::size_t j = 0; j < fixed; ++j )
    for ( unsigned i = 0; i < n; ++i )
    {
      bool const v = parity( p[i] & images[j] );
      m.set( i, static_cast<unsigned>( j ), v );
      m.set( static_cast<unsigned>( j ), i, v );
    }
  auto const pm = BitMatrix::from_columns( n, p );
  auto const inv = *pm.inverse();
  return inv.transpose() * m * inv;
}

} // namespace detail

/*! \brief Turns D into a symmetric zero-diagonal B in two stages.

  S agrees with D on U = ker(D + D^t) and is symmetric (the block outside
  U is set to zero in the basis that extends a basis of U by unit
  vectors). B agrees with S on {x : <diag(S), x> = 0} and has
  <w, B w> = 0 for the first unit vector w outside it.
*/
inline Symmetrization symmetrize( BitMatrix const& d )
{
  auto const n = d.rows();
  if ( d.cols() != n )
    throw input_error( "symmetrize needs a square matrix" );
  Symmetrization out;
  out.u_basis = kernel_basis( d + d.transpose() );
  auto const p = extend_to_basis( out.u_basis, n );
  std::vector<std::uint32_t> images;
  for ( auto const u : out.u_basis )
    images.push_back( d.apply( u ) );
  out.s = detail::symmetric_from_basis( n, p, images, out.u_basis.size() );
  out.diagonal = out.s.diagonal();

  if ( out.diagonal == 0 )
  {
    out.b = out.s;
    return out;
  }
  auto q = kernel_basis( BitMatrix( n, std::vector<std::uint32_t>{ out.diagonal } ) );
  unsigned w = 0;
  while ( !( ( out.diagonal >> w ) & 1u ) )
    ++w;
  q.push_back( 1u << w );
  std::vector<std::uint32_t> q_images;
  for ( std::size_t j = 0; j + 1 < q.size(); ++j )
    q_images.push_back( out.s.apply( q[j] ) );
  out.b = detail::symmetric_from_basis( n, q, q_images, q.size() - 1 );
  return out;
}

/*! \brief Best quadratic (-1)^{<x,Ax> + <x,alpha> + a} with A the upper half of B.

  alpha maximizes |(f h)^(alpha)| for h = (-1)^{<x,Ax>} (smallest alpha on
  ties) and a matches its sign, so <f, g> = max_alpha |(f h)^(alpha)|.
*/
inline std::pair<QuadraticPolynomial, double> quadratic_from_b( BooleanFunction const& f, BitMatrix const& b )
{
  auto const n = f.num_vars();
  if ( b.rows() != n || !b.is_symmetric() || b.diagonal() != 0 )
    throw input_error( "quadratic_from_b needs a symmetric zero-diagonal matrix of size n" );
  auto const form = QuadraticPolynomial::from_symmetric( b );
  auto const w = walsh_spectrum( f * from_quadratic( form ) );
  std::uint64_t best = 0;
  for ( std::uint64_t a = 1; a < w.size(); ++a )
    if ( std::abs( w[a] ) > std::abs( w[best] ) )
      best = a;
  auto const g = QuadraticPolynomial::from_symmetric( b, static_cast<std::uint32_t>( best ), w[best] < 0 );
  return { g, std::ldexp( static_cast<double>( std::abs( w[best] ) ), -static_cast<int>( n ) ) };
}

struct DecoderConfig
{
  std::optional<double> threshold; //!< default: half the mean weight
  unsigned restarts = 50;
  std::uint64_t seed = 0;
  bool oracle = false;
  bool shift_search = false;
};

struct DecodeResult
{
  QuadraticPolynomial q{ 1 };
  double correlation = 0;
  LinearFit fit;
  BitMatrix b;
  bool affine_fallback = false;
};

/*! \brief choice_function -> fit_linear_map -> symmetrize -> quadratic_from_b.

  The result is never worse than the best affine approximation: if
  B = 0 correlates better, that witness is returned instead.
*/
inline DecodeResult decode_quadratic( BooleanFunction const& f, DecoderConfig const& config = {} )
{
  auto const cf = choice_function( f );
  FitConfig fc;
  fc.threshold = config.threshold.value_or( cf.mean_weight() / 2.0 );
  fc.restarts = config.restarts;
  fc.seed = config.seed;
  fc.oracle = config.oracle;
  fc.shift_search = config.shift_search;

  DecodeResult r;
  r.fit = fit_linear_map( cf, fc );
  r.b = symmetrize( r.fit.d ).b;
  std::tie( r.q, r.correlation ) = quadratic_from_b( f, r.b );
  auto const n = f.num_vars();
  auto [affine, affine_corr] = quadratic_from_b( f, BitMatrix( n, n ) );
  if ( affine_corr > r.correlation )
  {
    r.q = affine;
    r.correlation = affine_corr;
    r.b = BitMatrix( n, n );
    r.affine_fallback = true;
  }
  return r;
}

// identities checked by the test suite ----------------------------------------

/*! \brief (E_x <f_x, g_x>^2, sum_alpha (fg)^(alpha)^4). */
inline std::pair<double, double> close_dir_identity( BooleanFunction const& f, BooleanFunction const& g )
{
  double lhs = 0;
  for ( std::uint64_t x = 0; x < f.num_points(); ++x )
  {
    auto const c = inner_product( derivative( f, x ), derivative( g, x ) );
    lhs += c * c;
  }
  lhs /= static_cast<double>( f.num_points() );
  return { lhs, wht( f * g ).power_sum( 4 ) };
}

/*! \brief (E_{x,y} sum_{alpha,beta} f_x^2(alpha) f_y^2(beta) f_{x+y}^2(alpha+beta), E_s sum_alpha f_s^6(alpha)). */
inline std::pair<double, double> weak_lin_identity( BooleanFunction const& f )
{
  auto const points = f.num_points();
  std::vector<std::vector<double>> sq( points );
  for ( std::uint64_t y = 0; y < points; ++y )
  {
    sq[y] = wht( derivative( f, y ) ).coeffs;
    for ( auto& c : sq[y] )
      c *= c;
  }
  double lhs = 0, rhs = 0;
  for ( std::uint64_t x = 0; x < points; ++x )
    for ( std::uint64_t y = 0; y < points; ++y )
      for ( std::uint64_t a = 0; a < points; ++a )
        for ( std::uint64_t b = 0; b < points; ++b )
          lhs += sq[x][a] * sq[y][b] * sq[x ^ y][a ^ b];
  for ( std::uint64_t s = 0; s < points; ++s )
    for ( auto const c : sq[s] )
      rhs += c * c * c;
  auto const p = static_cast<double>( points );
  return { lhs / ( p * p ), rhs / p };
}

/*! \brief F(z) = sum_y f_y^(Dy + z)^2 for every z. Its transform is F^(x) = f_x^(D^t x)^2 >= 0. */
inline std::vector<double> shifted_choice_mass( BooleanFunction const& f, BitMatrix const& d )
{
  auto const points = f.num_points();
  std::vector<double> out( points, 0.0 );
  for ( std::uint64_t y = 0; y < points; ++y )
  {
    auto const s = wht( derivative( f, y ) );
    auto const dy = d.apply( static_cast<std::uint32_t>( y ) );
    for ( std::uint64_t z = 0; z < points; ++z )
      out[z] += s[dy ^ z] * s[dy ^ z];
  }
  return out;
}

/*! \brief max |f_y^(alpha)| over all pairs with <alpha, y> = 1 (zero for every f). */
inline double max_off_orthogonal_coefficient( BooleanFunction const& f )
{
  double m = 0;
  for ( std::uint64_t y = 0; y < f.num_points(); ++y )
  {
    auto const s = wht( derivative( f, y ) );
    for ( std::uint64_t a = 0; a < f.num_points(); ++a )
      if ( parity( a & y ) )
        m = std::max( m, std::abs( s[a] ) );
  }
  return m;
}

} // namespace lowdeg
