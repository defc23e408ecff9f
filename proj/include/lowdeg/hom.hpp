#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "testers.hpp"

namespace lowdeg
{

inline bool is_prime( std::uint32_t p )
{
  if ( p < 2 )
    return false;
  for ( std::uint32_t d = 2; d * d <= p; ++d )
    if ( p % d == 0 )
      return false;
  return true;
}

/*! \brief G = Z_{p^{k_1}} x ... x Z_{p^{k_r}}.

  Elements are indexed in mixed radix with the last coordinate varying
  fastest, so index order is lexicographic order of tuples.
*/
class FiniteAbelianPGroup
{
public:
  static constexpr std::uint64_t max_order = std::uint64_t{ 1 } << 16;

  FiniteAbelianPGroup( std::uint32_t p, std::vector<unsigned> exponents ) : p_( p ), exponents_( std::move( exponents ) )
  {
    if ( !is_prime( p ) )
      throw input_error( "group prime " + std::to_string( p ) + " is not prime" );
    if ( exponents_.empty() )
      throw input_error( "a group needs at least one cyclic factor" );
    size_ = 1;
    for ( auto const k : exponents_ )
    {
      if ( k < 1 )
        throw input_error( "cyclic factor exponents must be at least 1" );
      std::uint64_t m = 1;
      for ( unsigned i = 0; i < k; ++i )
      {
        m *= p;
        if ( m > max_order )
          throw input_error( "group order exceeds 2^16" );
      }
      moduli_.push_back( static_cast<std::uint32_t>( m ) );
      size_ *= m;
      if ( size_ > max_order )
        throw input_error( "group order exceeds 2^16" );
    }
  }

  std::uint32_t prime() const noexcept { return p_; }
  std::vector<unsigned> const& exponents() const noexcept { return exponents_; }
  unsigned rank() const noexcept { return static_cast<unsigned>( moduli_.size() ); }
  std::uint32_t modulus( unsigned i ) const noexcept { return moduli_[i]; }
  std::uint64_t size() const noexcept { return size_; }
  bool elementary() const noexcept
  {
    return std::all_of( exponents_.begin(), exponents_.end(), []( auto k ) { return k == 1; } );
  }

  std::vector<std::uint32_t> decode( std::uint64_t index ) const
  {
    std::vector<std::uint32_t> t( rank() );
    for ( unsigned i = rank(); i-- > 0; )
    {
      t[i] = static_cast<std::uint32_t>( index % moduli_[i] );
      index /= moduli_[i];
    }
    return t;
  }

  std::uint64_t encode( std::vector<std::uint32_t> const& t ) const
  {
    if ( t.size() != rank() )
      throw input_error( "tuple has " + std::to_string( t.size() ) + " coordinates, expected " +
                         std::to_string( rank() ) );
    std::uint64_t index = 0;
    for ( unsigned i = 0; i < rank(); ++i )
    {
      if ( t[i] >= moduli_[i] )
        throw input_error( "coordinate " + std::to_string( t[i] ) + " out of range for Z_" +
                           std::to_string( moduli_[i] ) );
      index = index * moduli_[i] + t[i];
    }
    return index;
  }

  std::uint64_t add( std::uint64_t a, std::uint64_t b ) const noexcept
  {
    std::uint64_t out = 0, place = 1;
    for ( unsigned i = rank(); i-- > 0; )
    {
      auto const m = moduli_[i];
      auto const da = a % m, db = b % m;
      a /= m;
      b /= m;
      out += ( ( da + db ) % m ) * place;
      place *= m;
    }
    return out;
  }

  std::uint64_t scale( std::uint64_t c, std::uint64_t a ) const noexcept
  {
    std::uint64_t out = 0, place = 1;
    for ( unsigned i = rank(); i-- > 0; )
    {
      auto const m = moduli_[i];
      out += ( ( a % m ) * ( c % m ) % m ) * place;
      a /= m;
      place *= m;
    }
    return out;
  }

  std::uint64_t unit( unsigned i ) const
  {
    std::vector<std::uint32_t> t( rank(), 0 );
    t[i] = 1;
    return encode( t );
  }

  std::string to_string() const
  {
    std::string s;
    for ( std::size_t i = 0; i < exponents_.size(); ++i )
      s += ( i ? " x " : "" ) + std::to_string( p_ ) + "^" + std::to_string( exponents_[i] );
    return s;
  }

  friend bool operator==( FiniteAbelianPGroup const& a, FiniteAbelianPGroup const& b )
  {
    return a.p_ == b.p_ && a.exponents_ == b.exponents_;
  }

private:
  std::uint32_t p_;
  std::vector<unsigned> exponents_;
  std::vector<std::uint32_t> moduli_;
  std::uint64_t size_ = 1;
};

/*! \brief phi : G -> H with H a power of Z_p; table[x] is the index of phi(x) in H. */
class GroupMap
{
public:
  GroupMap( FiniteAbelianPGroup domain, FiniteAbelianPGroup codomain, std::vector<std::uint64_t> table )
      : domain_( std::move( domain ) ), codomain_( std::move( codomain ) ), table_( std::move( table ) )
  {
    if ( !codomain_.elementary() )
      throw input_error( "the codomain must be a power of Z_p (all exponents 1), got " + codomain_.to_string() );
    if ( codomain_.prime() != domain_.prime() )
      throw input_error( "domain and codomain must share the prime p" );
    if ( table_.size() != domain_.size() )
      throw input_error( "map table has " + std::to_string( table_.size() ) + " entries, expected |G| = " +
                         std::to_string( domain_.size() ) );
    for ( auto const v : table_ )
      if ( v >= codomain_.size() )
        throw input_error( "map value outside the codomain" );
  }

  FiniteAbelianPGroup const& domain() const noexcept { return domain_; }
  FiniteAbelianPGroup const& codomain() const noexcept { return codomain_; }
  std::vector<std::uint64_t> const& table() const noexcept { return table_; }
  std::uint64_t operator()( std::uint64_t x ) const noexcept { return table_[x]; }

  friend bool operator==( GroupMap const& a, GroupMap const& b )
  {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.table_ == b.table_;
  }

private:
  FiniteAbelianPGroup domain_;
  FiniteAbelianPGroup codomain_;
  std::vector<std::uint64_t> table_;
};

/*! \brief The homomorphism with psi(e_i) = images[i]. */
inline GroupMap homomorphism_from_images( FiniteAbelianPGroup const& g, FiniteAbelianPGroup const& h,
                                          std::vector<std::uint64_t> const& images )
{
  if ( images.size() != g.rank() )
    throw input_error( "need one image per cyclic factor" );
  std::vector<std::uint64_t> table( g.size() );
  for ( std::uint64_t x = 0; x < g.size(); ++x )
  {
    auto const t = g.decode( x );
    std::uint64_t v = 0;
    for ( unsigned i = 0; i < g.rank(); ++i )
      v = h.add( v, h.scale( t[i], images[i] ) );
    table[x] = v;
  }
  return GroupMap( g, h, std::move( table ) );
}

/*! \brief phi(x) = sum_i x_i phi(e_i) for every x; since H has exponent p,
  this is equivalent to phi being a homomorphism. */
inline bool is_homomorphism( GroupMap const& phi )
{
  auto const& g = phi.domain();
  std::vector<std::uint64_t> images;
  for ( unsigned i = 0; i < g.rank(); ++i )
    images.push_back( phi( g.unit( i ) ) );
  return homomorphism_from_images( g, phi.codomain(), images ) == phi;
}

/*! \brief Exact Pr_{x,y}[phi(x) + phi(y) = phi(x + y)] over all ordered pairs. */
inline double blr_agreement( GroupMap const& phi, std::uint64_t max_pairs = std::uint64_t{ 1 } << 28 )
{
  auto const& g = phi.domain();
  auto const& h = phi.codomain();
  auto const size = g.size();
  if ( size * size > max_pairs )
    throw resource_error( "exact agreement enumerates |G|^2 = " + std::to_string( size * size ) +
                          " pairs, over the limit " + std::to_string( max_pairs ) + "; use the sampled variant" );
  auto const hits = parallel_reduce(
      size, std::uint64_t{ 0 },
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        std::uint64_t c = 0;
        for ( auto x = lo; x < hi; ++x )
          for ( std::uint64_t y = 0; y < size; ++y )
            c += h.add( phi( x ), phi( y ) ) == phi( g.add( x, y ) );
        return c;
      },
      []( std::uint64_t a, std::uint64_t b ) { return a + b; } );
  return static_cast<double>( hits ) / static_cast<double>( size * size );
}

/*! \brief Monte-Carlo agreement; trial i draws (x, y) from stream (seed, i). */
inline TestReport blr_agreement_sampled( GroupMap const& phi, std::uint64_t trials, std::uint64_t seed )
{
  if ( trials < 1 )
    throw input_error( "trials must be at least 1" );
  auto const& g = phi.domain();
  auto const& h = phi.codomain();
  auto const hits = parallel_reduce(
      trials, std::uint64_t{ 0 },
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        std::uint64_t c = 0;
        for ( auto t = lo; t < hi; ++t )
        {
          RandomStream rng( seed, t );
          auto const x = rng.below( g.size() );
          auto const y = rng.below( g.size() );
          c += h.add( phi( x ), phi( y ) ) == phi( g.add( x, y ) );
        }
        return c;
      },
      []( std::uint64_t a, std::uint64_t b ) { return a + b; } );
  TestReport r;
  r.test = "hom-blr";
  r.trials = trials;
  r.accepts = hits;
  r.acceptance = static_cast<double>( hits ) / static_cast<double>( trials );
  if ( trials >= 2 )
    r.std_error = std::sqrt( r.acceptance * ( 1 - r.acceptance ) / static_cast<double>( trials - 1 ) );
  r.seed = seed;
  r.queries_per_trial = 3;
  return r;
}

/*! \brief Pr_x[phi(x) = psi(x)]. */
inline double agreement( GroupMap const& phi, GroupMap const& psi )
{
  if ( !( phi.domain() == psi.domain() ) || !( phi.codomain() == psi.codomain() ) )
    throw input_error( "maps have different domains or codomains" );
  std::uint64_t c = 0;
  for ( std::uint64_t x = 0; x < phi.domain().size(); ++x )
    c += phi( x ) == psi( x );
  return static_cast<double>( c ) / static_cast<double>( phi.domain().size() );
}

struct BestHomomorphism
{
  GroupMap psi;
  double agreement;
};

/*! \brief Exhaustive search over Hom(G, H), enumerated by generator images
  in lexicographic order (first factor most significant); first maximum wins. */
inline BestHomomorphism best_homomorphism( GroupMap const& phi, std::uint64_t max_homs = std::uint64_t{ 1 } << 20 )
{
  auto const& g = phi.domain();
  auto const& h = phi.codomain();
  // H has exponent p, so every choice of generator images is admissible
  std::uint64_t count = 1;
  for ( unsigned i = 0; i < g.rank(); ++i )
  {
    count *= h.size();
    if ( count > max_homs )
      throw resource_error( "Hom(G,H) has more than " + std::to_string( max_homs ) + " elements" );
  }
  struct Best
  {
    std::uint64_t hits = 0;
    std::uint64_t code = 0;
    bool set = false;
  };
  auto const best = parallel_reduce(
      count, Best{},
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        Best b;
        std::vector<std::uint64_t> images( g.rank() );
        for ( auto code = lo; code < hi; ++code )
        {
          auto c = code;
          for ( unsigned i = g.rank(); i-- > 0; )
          {
            images[i] = c % h.size();
            c /= h.size();
          }
          auto const psi = homomorphism_from_images( g, h, images );
          std::uint64_t hits = 0;
          for ( std::uint64_t x = 0; x < g.size(); ++x )
            hits += psi( x ) == phi( x );
          if ( !b.set || hits > b.hits )
            b = { hits, code, true };
        }
        return b;
      },
      []( Best const& x, Best const& y ) { return ( !x.set || ( y.set && y.hits > x.hits ) ) ? y : x; } );
  std::vector<std::uint64_t> images( g.rank() );
  auto c = best.code;
  for ( unsigned i = g.rank(); i-- > 0; )
  {
    images[i] = c % h.size();
    c /= h.size();
  }
  return { homomorphism_from_images( g, h, images ),
           static_cast<double>( best.hits ) / static_cast<double>( g.size() ) };
}

struct ShiftCorrection
{
  GroupMap psi_prime;
  unsigned coordinate = 0;      //!< i
  std::uint32_t generator = 0;  //!< g, a unit of Z_{p^{k_i}}
  std::uint64_t e_size = 0;     //!< |E|
  std::uint64_t e_prime_size = 0; //!< |E'|
  double agreement = 0;         //!< Pr_x[phi(x) = psi'(x)]
};

/*! \brief Turns agreement with the affine map psi + h into agreement with a homomorphism.

  With E = {x : phi(x) = psi(x) + h}, picks the coordinate i and unit g
  maximizing E' = {x in E : x_i = g} (smallest i, then smallest g, on
  ties) and sets psi'(e_i) = psi(e_i) + g^{-1} h, other generators
  unchanged. Then psi'(x) = psi(x) + h = phi(x) on E'.
*/
inline ShiftCorrection shift_correction( GroupMap const& phi, GroupMap const& psi, std::uint64_t h )
{
  auto const& g = phi.domain();
  auto const& cod = phi.codomain();
  if ( !( psi.domain() == g ) || !( psi.codomain() == cod ) )
    throw input_error( "phi and psi have different domains or codomains" );
  if ( !is_homomorphism( psi ) )
    throw input_error( "psi is not a homomorphism" );
  if ( h >= cod.size() )
    throw input_error( "shift h outside the codomain" );
  std::vector<std::uint64_t> e;
  for ( std::uint64_t x = 0; x < g.size(); ++x )
    if ( phi( x ) == cod.add( psi( x ), h ) )
      e.push_back( x );
  if ( e.empty() )
    throw input_error( "E = {x : phi(x) = psi(x) + h} is empty" );

  auto const p = g.prime();
  ShiftCorrection best{ psi, 0, 0, e.size(), 0, 0 };
  bool have = false;
  for ( unsigned i = 0; i < g.rank(); ++i )
  {
    std::vector<std::uint64_t> counts( g.modulus( i ), 0 );
    for ( auto const x : e )
      ++counts[g.decode( x )[i]];
    for ( std::uint32_t unit = 1; unit < g.modulus( i ); ++unit )
      if ( unit % p != 0 && ( !have || counts[unit] > best.e_prime_size ) )
      {
        best.coordinate = i;
        best.generator = unit;
        best.e_prime_size = counts[unit];
        have = true;
      }
  }
  std::uint32_t inverse = 1;
  while ( ( static_cast<std::uint64_t>( best.generator % p ) * inverse ) % p != 1 )
    ++inverse;
  std::vector<std::uint64_t> images;
  for ( unsigned j = 0; j < g.rank(); ++j )
    images.push_back( psi( g.unit( j ) ) );
  images[best.coordinate] = cod.add( images[best.coordinate], cod.scale( inverse, h ) );
  best.psi_prime = homomorphism_from_images( g, cod, images );
  best.agreement = agreement( phi, best.psi_prime );
  return best;
}

} // namespace lowdeg
