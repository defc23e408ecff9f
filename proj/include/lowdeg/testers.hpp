#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boolean_function.hpp"
#include "errors.hpp"
#include "genavg.hpp"
#include "gowers.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace lowdeg
{

/*! \brief Hypergraph on vertices 1..t; each edge is stored as a bit mask (bit i = vertex i + 1). */
class Hypergraph
{
public:
  static constexpr unsigned max_vertices = 31;

  explicit Hypergraph( unsigned t ) : t_( t )
  {
    if ( t > max_vertices )
      throw input_error( "hypergraphs support at most 31 vertices, got " + std::to_string( t ) );
  }

  /*! \brief Adds an edge given by 1-based vertex indices; duplicates are ignored. */
  Hypergraph& add_edge( std::vector<unsigned> const& vertices )
  {
    if ( vertices.empty() )
      throw input_error( "hyperedges must contain at least one vertex" );
    std::uint32_t mask = 0;
    for ( auto const v : vertices )
    {
      if ( v < 1 || v > t_ )
        throw input_error( "vertex " + std::to_string( v ) + " outside [1, " + std::to_string( t_ ) + "]" );
      if ( mask & ( 1u << ( v - 1 ) ) )
        throw input_error( "vertex " + std::to_string( v ) + " repeated inside an edge" );
      mask |= 1u << ( v - 1 );
    }
    return add_edge_mask( mask );
  }

  Hypergraph& add_edge_mask( std::uint32_t mask )
  {
    if ( mask == 0 || ( t_ < 32 && ( mask >> t_ ) != 0 ) )
      throw input_error( "edge mask outside the vertex set" );
    if ( std::find( edges_.begin(), edges_.end(), mask ) == edges_.end() )
      edges_.push_back( mask );
    return *this;
  }

  static Hypergraph complete( unsigned t, unsigned edge_size )
  {
    Hypergraph h( t );
    for ( std::uint32_t m = 1; m < ( 1u << t ); ++m )
      if ( static_cast<unsigned>( std::popcount( m ) ) == edge_size )
        h.add_edge_mask( m );
    return h;
  }

  unsigned num_vertices() const noexcept { return t_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const std::uint32_t> edges() const noexcept { return edges_; }

  unsigned max_edge_size() const noexcept
  {
    unsigned d = 0;
    for ( auto const e : edges_ )
      d = std::max( d, static_cast<unsigned>( std::popcount( e ) ) );
    return d;
  }

  bool is_uniform( unsigned size ) const noexcept
  {
    return std::all_of( edges_.begin(), edges_.end(),
                        [size]( auto e ) { return static_cast<unsigned>( std::popcount( e ) ) == size; } );
  }

  /*! \brief Edges of size >= 2; a single-vertex edge checks f(x)f(x) = f(0)^2 and always passes. */
  std::size_t nontrivial_edges() const noexcept
  {
    return static_cast<std::size_t>(
        std::count_if( edges_.begin(), edges_.end(), []( auto e ) { return std::popcount( e ) >= 2; } ) );
  }

private:
  unsigned t_;
  std::vector<std::uint32_t> edges_;
};

/*! \brief Outcome of a Monte-Carlo run of a test. */
struct TestReport
{
  std::string test;
  std::uint64_t trials = 0;
  std::uint64_t accepts = 0;
  double acceptance = 0;
  double std_error = 0;
  std::uint64_t seed = 0;
  std::optional<double> theoretical_bound;
  std::uint64_t queries_per_trial = 0;
};

/*! \brief One multiplicative check over t random points: accept iff
  prod_j f(sum_{i in c_j} x_i) = f(0)^{sign_exponent}. */
struct LocalCheck
{
  std::vector<std::uint32_t> columns;
  unsigned sign_exponent = 0;
};

namespace detail
{

inline bool check_passes( BooleanFunction const& f, LocalCheck const& c, std::uint64_t const* xs )
{
  bool acc = ( c.sign_exponent & 1u ) && f.bit( 0 );
  for ( auto m : c.columns )
  {
    std::uint64_t p = 0;
    for ( ; m; m &= m - 1 )
      p ^= xs[std::countr_zero( m )];
    acc ^= f.bit( p );
  }
  return !acc;
}

inline TestReport run_checks( std::string name, BooleanFunction const& f, unsigned t,
                              std::vector<LocalCheck> const& checks, std::uint64_t trials, std::uint64_t seed,
                              std::uint64_t queries )
{
  if ( trials < 1 )
    throw input_error( "trials must be at least 1" );
  auto const n = f.num_vars();
  auto const accepts = parallel_reduce(
      trials, std::uint64_t{ 0 },
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        std::uint64_t count = 0;
        std::vector<std::uint64_t> xs( std::max( 1u, t ) );
        for ( auto trial = lo; trial < hi; ++trial )
        {
          RandomStream rng( seed, trial );
          for ( unsigned i = 0; i < t; ++i )
            xs[i] = rng.bits( n );
          bool ok = true;
          for ( auto const& c : checks )
            if ( !check_passes( f, c, xs.data() ) )
            {
              ok = false;
              break;
            }
          count += ok;
        }
        return count;
      },
      []( std::uint64_t a, std::uint64_t b ) { return a + b; } );
  TestReport r;
  r.test = std::move( name );
  r.trials = trials;
  r.accepts = accepts;
  r.acceptance = static_cast<double>( accepts ) / static_cast<double>( trials );
  if ( trials >= 2 )
  {
    auto const p = r.acceptance;
    r.std_error = std::sqrt( p * ( 1.0 - p ) / static_cast<double>( trials - 1 ) );
  }
  r.seed = seed;
  r.queries_per_trial = queries;
  return r;
}

/*! Accept probability of "all checks pass" via the expansion
  prod_e (1 + s_e X_e) / 2 = 2^{-|E|} sum_S prod_{e in S} s_e X_e,
  each product being a generalized average after cancelling repeated columns. */
inline double exact_acceptance_checks( BooleanFunction const& f, unsigned t, std::vector<LocalCheck> const& checks,
                                       unsigned max_log2_assignments = 26 )
{
  if ( checks.size() > 20 )
    throw resource_error( "exact acceptance expands 2^|E| terms; |E|=" + std::to_string( checks.size() ) +
                          " exceeds the limit 20" );
  auto const f0 = f.bit( 0 );
  double total = 0;
  for ( std::uint32_t s = 0; s < ( 1u << checks.size() ); ++s )
  {
    std::map<std::uint32_t, unsigned> multiplicity;
    unsigned sign = 0;
    for ( std::size_t e = 0; e < checks.size(); ++e )
      if ( ( s >> e ) & 1u )
      {
        for ( auto const c : checks[e].columns )
          ++multiplicity[c];
        sign += checks[e].sign_exponent;
      }
    std::vector<std::uint32_t> cols;
    for ( auto const& [c, m] : multiplicity )
      for ( unsigned i = 0; i < m; ++i )
        cols.push_back( c );
    auto const a = simplify( BinaryMatrix( t, std::move( cols ) ) );
    auto const avg = generalized_average_exact( a, f, max_log2_assignments );
    total += ( ( sign & 1u ) && f0 ) ? -avg : avg;
  }
  return std::ldexp( total, -static_cast<int>( checks.size() ) );
}

inline std::vector<LocalCheck> linearity_checks( Hypergraph const& h )
{
  std::vector<LocalCheck> out;
  for ( auto const e : h.edges() )
  {
    LocalCheck c;
    for ( auto m = e; m; m &= m - 1 )
      c.columns.push_back( m & ( ~m + 1 ) );
    c.columns.push_back( e );
    c.sign_exponent = static_cast<unsigned>( std::popcount( e ) ) + 1;
    out.push_back( std::move( c ) );
  }
  return out;
}

inline std::vector<LocalCheck> quadraticity_checks( Hypergraph const& h )
{
  if ( !h.is_uniform( 3 ) )
    throw input_error( "the quadraticity test needs a 3-uniform hypergraph" );
  std::vector<LocalCheck> out;
  for ( auto const e : h.edges() )
  {
    LocalCheck c;
    // the 7 non-empty subsets of the edge
    for ( auto sub = e; sub; sub = ( sub - 1 ) & e )
      c.columns.push_back( sub );
    std::sort( c.columns.begin(), c.columns.end() );
    c.sign_exponent = 1;
    out.push_back( std::move( c ) );
  }
  return out;
}

inline std::uint64_t distinct_queries( unsigned t, std::vector<LocalCheck> const& checks )
{
  std::vector<std::uint32_t> pts;
  for ( auto const& c : checks )
    pts.insert( pts.end(), c.columns.begin(), c.columns.end() );
  std::sort( pts.begin(), pts.end() );
  pts.erase( std::unique( pts.begin(), pts.end() ), pts.end() );
  auto const non_unit = std::count_if( pts.begin(), pts.end(), []( auto m ) { return std::popcount( m ) >= 2; } );
  return t + static_cast<std::uint64_t>( non_unit );
}

inline LocalCheck akklr_check( unsigned k )
{
  LocalCheck c;
  for ( std::uint32_t s = 0; s < ( 1u << k ); ++s )
    c.columns.push_back( 1u | ( s << 1 ) );
  return c;
}

} // namespace detail

// BLR -----------------------------------------------------------------------

/*! \brief One BLR trial: draws x, y and checks f(x)f(y)f(x+y) = 1, or = f(0) when `affine`. */
inline bool blr_trial( BooleanFunction const& f, RandomStream& rng, bool affine = false )
{
  auto const n = f.num_vars();
  auto const x = rng.bits( n );
  auto const y = rng.bits( n );
  bool const product = f.bit( x ) ^ f.bit( y ) ^ f.bit( x ^ y );
  return product == ( affine && f.bit( 0 ) );
}

inline TestReport blr_test( BooleanFunction const& f, std::uint64_t trials, std::uint64_t seed, bool affine = false )
{
  LocalCheck c{ { 1u, 2u, 3u }, affine ? 1u : 0u };
  return detail::run_checks( affine ? "blr-affine" : "blr", f, 2, { c }, trials, seed, 3 );
}

/*! \brief Exact BLR acceptance (1 + f(0)^{affine} sum_alpha f^(alpha)^3) / 2. */
inline double blr_exact_acceptance( BooleanFunction const& f, bool affine = false )
{
  auto const s = wht( f ).power_sum( 3 );
  auto const sign = ( affine && f.bit( 0 ) ) ? -1.0 : 1.0;
  return ( 1.0 + sign * s ) / 2.0;
}

// hypergraph tests ---------------------------------------------------------------

/*! \brief Draws x_1..x_t once per trial and accepts iff for every edge e,
  prod_{i in e} f(x_i) * f(sum_{i in e} x_i) = f(0)^{|e|+1}. */
inline TestReport hypergraph_linearity_test( BooleanFunction const& f, Hypergraph const& h, std::uint64_t trials,
                                             std::uint64_t seed )
{
  auto const name = h.is_uniform( 2 ) ? "graph" : "hypergraph-lin";
  return detail::run_checks( name, f, h.num_vertices(), detail::linearity_checks( h ), trials, seed,
                             h.num_vertices() + h.num_edges() );
}

/*! \brief Draws x_1..x_t once per trial and accepts iff for every edge {i,j,k}
  the product of f over the 7 non-empty subset sums equals f(0). */
inline TestReport hypergraph_quadraticity_test( BooleanFunction const& f, Hypergraph const& h, std::uint64_t trials,
                                                std::uint64_t seed )
{
  auto const checks = detail::quadraticity_checks( h );
  return detail::run_checks( "hypergraph-quad", f, h.num_vertices(), checks, trials, seed,
                             detail::distinct_queries( h.num_vertices(), checks ) );
}

/*! \brief Order-k derivative test: accepts iff f_{y_1..y_k}(x) = +1. */
inline TestReport akklr_test( BooleanFunction const& f, unsigned k, std::uint64_t trials, std::uint64_t seed )
{
  if ( k < 1 || k > 20 )
    throw input_error( "derivative order k must be in [1, 20]" );
  return detail::run_checks( "akklr", f, k + 1, { detail::akklr_check( k ) }, trials, seed,
                             std::uint64_t{ 1 } << k );
}

/*! \brief Exact acceptance of akklr_test: (1 + ||f||_{U_k}^{2^k}) / 2. */
inline double akklr_exact_acceptance( BooleanFunction const& f, unsigned k )
{
  return ( 1.0 + gowers_power_exact( f, k ) ) / 2.0;
}

/*! \brief Exact acceptance of the hypergraph linearity test through generalized averages. */
inline double exact_acceptance_hypergraph( BooleanFunction const& f, Hypergraph const& h )
{
  return detail::exact_acceptance_checks( f, h.num_vertices(), detail::linearity_checks( h ) );
}

/*! \brief Exact acceptance of the hypergraph quadraticity test through generalized averages. */
inline double exact_acceptance_quadraticity( BooleanFunction const& f, Hypergraph const& h )
{
  return detail::exact_acceptance_checks( f, h.num_vertices(), detail::quadraticity_checks( h ) );
}

/*! \brief 1/2^{|E|} + ||f||_{U_d}, d the largest edge size, counting only edges of size >= 2. */
inline double linearity_soundness_bound( BooleanFunction const& f, Hypergraph const& h )
{
  auto const e = h.nontrivial_edges();
  if ( e == 0 )
    return 1.0;
  return std::ldexp( 1.0, -static_cast<int>( e ) ) + gowers_norm_exact( f, h.max_edge_size() );
}

/*! \brief 1/2^{|E|} + ||f||_{U_3}. */
inline double quadraticity_soundness_bound( BooleanFunction const& f, Hypergraph const& h )
{
  if ( h.num_edges() == 0 )
    return 1.0;
  return std::ldexp( 1.0, -static_cast<int>( h.num_edges() ) ) + gowers_norm_exact( f, 3 );
}

} // namespace lowdeg
