#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gf2.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace lowdeg
{

/*! \brief Boolean function f: {0,1}^n -> {-1,+1} as a bit-packed truth table.

  Stored bit b at point index x means f(x) = (-1)^b, so the pointwise
  product of two functions is the XOR of their tables. Point index x
  encodes the input with variable x_1 as the least significant bit.

  Immutable after construction; share freely across threads.
*/
class BooleanFunction
{
public:
  static constexpr unsigned max_vars = 24;

  /*! \brief The constant +1 function on n variables. */
  explicit BooleanFunction( unsigned n ) : n_( check_vars( n ) ), words_( word_count( n ), 0 ) {}

  /*! \brief Adopts packed words (64 points per word, low bit first); excess bits are cleared. */
  BooleanFunction( unsigned n, std::vector<std::uint64_t> words ) : n_( check_vars( n ) ), words_( std::move( words ) )
  {
    if ( words_.size() != word_count( n ) )
      throw input_error( "truth table for n=" + std::to_string( n ) + " needs " +
                         std::to_string( word_count( n ) ) + " words, got " + std::to_string( words_.size() ) );
    if ( n < 6 )
      words_[0] &= ( std::uint64_t{ 1 } << ( std::uint64_t{ 1 } << n ) ) - 1;
  }

  /*! \brief Builds f with f(x) = (-1)^{bit_of(x)}. */
  template<class BitFn>
  static BooleanFunction tabulate( unsigned n, BitFn&& bit_of )
  {
    BooleanFunction f( n );
    auto const points = f.num_points();
    for ( std::uint64_t x = 0; x < points; ++x )
      if ( bit_of( x ) )
        f.words_[x >> 6] |= std::uint64_t{ 1 } << ( x & 63 );
    return f;
  }

  static std::size_t word_count( unsigned n ) noexcept
  {
    return n <= 6 ? 1 : ( std::size_t{ 1 } << ( n - 6 ) );
  }

  unsigned num_vars() const noexcept { return n_; }
  std::uint64_t num_points() const noexcept { return std::uint64_t{ 1 } << n_; }
  std::uint64_t point_mask() const noexcept { return num_points() - 1; }

  bool bit( std::uint64_t x ) const noexcept { return ( words_[x >> 6] >> ( x & 63 ) ) & 1u; }
  int value( std::uint64_t x ) const noexcept { return bit( x ) ? -1 : 1; }
  int operator()( std::uint64_t x ) const noexcept { return value( x ); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /*! \brief Number of points where f = -1. */
  std::uint64_t minus_count() const noexcept
  {
    std::uint64_t c = 0;
    for ( auto const w : words_ )
      c += static_cast<std::uint64_t>( std::popcount( w ) );
    return c;
  }

  /*! \brief Sum of f over all points (an exact integer). */
  std::int64_t sum() const noexcept
  {
    return static_cast<std::int64_t>( num_points() ) - 2 * static_cast<std::int64_t>( minus_count() );
  }

  double mean() const noexcept { return static_cast<double>( sum() ) / static_cast<double>( num_points() ); }

  BooleanFunction operator-() const
  {
    auto w = words_;
    for ( auto& x : w )
      x = ~x;
    return BooleanFunction( n_, std::move( w ) );
  }

  friend BooleanFunction operator*( BooleanFunction const& f, BooleanFunction const& g )
  {
    check_same_dims( f, g );
    auto w = f.words_;
    for ( std::size_t i = 0; i < w.size(); ++i )
      w[i] ^= g.words_[i];
    return BooleanFunction( f.n_, std::move( w ) );
  }

  friend bool operator==( BooleanFunction const&, BooleanFunction const& ) = default;

  /*! \brief Table as 2^n characters from {0,1}, point 0 first. */
  std::string to_bit_string() const
  {
    std::string s( num_points(), '0' );
    for ( std::uint64_t x = 0; x < num_points(); ++x )
      if ( bit( x ) )
        s[x] = '1';
    return s;
  }

  static void check_same_dims( BooleanFunction const& f, BooleanFunction const& g )
  {
    if ( f.n_ != g.n_ )
      throw input_error( "dimension mismatch: n=" + std::to_string( f.n_ ) + " vs n=" + std::to_string( g.n_ ) );
  }

private:
  static unsigned check_vars( unsigned n )
  {
    if ( n < 1 || n > max_vars )
      throw input_error( "number of variables must be in [1, 24], got " + std::to_string( n ) );
    return n;
  }

  unsigned n_;
  std::vector<std::uint64_t> words_;
};

/*! \brief f(x_i) = (-1)^{bits[i]}; bits must hold exactly 2^n entries (each 0 or 1). */
template<class Bit>
BooleanFunction from_truth_table( unsigned n, std::span<const Bit> bits )
{
  if ( n < 1 || n > BooleanFunction::max_vars )
    throw input_error( "number of variables must be in [1, 24], got " + std::to_string( n ) );
  auto const expected = std::uint64_t{ 1 } << n;
  if ( bits.size() != expected )
    throw input_error( "truth table length mismatch: expected " + std::to_string( expected ) + " entries for n=" +
                       std::to_string( n ) + ", got " + std::to_string( bits.size() ) );
  return BooleanFunction::tabulate( n, [&]( std::uint64_t x ) { return bits[x] != Bit{ 0 }; } );
}

inline BooleanFunction from_truth_table( unsigned n, std::vector<int> const& bits )
{
  return from_truth_table( n, std::span<const int>( bits ) );
}

namespace detail
{

/*! Permutes the 64 bits of a word by x -> x ^ low, low < 64. */
inline std::uint64_t xor_permute_word( std::uint64_t w, unsigned low ) noexcept
{
  static constexpr std::uint64_t masks[6] = {
      0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
      0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL };
  for ( unsigned j = 0; j < 6; ++j )
    if ( ( low >> j ) & 1u )
    {
      auto const s = 1u << j;
      w = ( ( w & masks[j] ) << s ) | ( ( w >> s ) & masks[j] );
    }
  return w;
}

} // namespace detail

/*! \brief The translate x -> f(x + y). */
inline BooleanFunction shift( BooleanFunction const& f, std::uint64_t y )
{
  y &= f.point_mask();
  auto const src = f.words();
  std::vector<std::uint64_t> out( src.size() );
  auto const high = y >> 6;
  auto const low = static_cast<unsigned>( y & 63 );
  for ( std::size_t w = 0; w < src.size(); ++w )
    out[w] = detail::xor_permute_word( src[w ^ high], low );
  return BooleanFunction( f.num_vars(), std::move( out ) );
}

/*! \brief Directional derivative f_y(x) = f(x) f(x + y). */
inline BooleanFunction derivative( BooleanFunction const& f, std::uint64_t y )
{
  return f * shift( f, y );
}

/*! \brief Order-k derivative: the product of f over x + (all subset sums of ys). */
inline BooleanFunction iterated_derivative( BooleanFunction const& f, std::span<const std::uint64_t> ys )
{
  if ( ys.empty() )
    throw input_error( "iterated_derivative needs at least one direction" );
  auto g = f;
  for ( auto const y : ys )
    g = derivative( g, y );
  return g;
}

inline BooleanFunction iterated_derivative( BooleanFunction const& f, std::initializer_list<std::uint64_t> ys )
{
  return iterated_derivative( f, std::span<const std::uint64_t>( ys.begin(), ys.size() ) );
}

/*! \brief In-place unnormalized Walsh-Hadamard butterfly over a power-of-two range. */
template<class T>
void fwht( std::span<T> a ) noexcept
{
  auto const size = a.size();
  for ( std::size_t h = 1; h < size; h <<= 1 )
    for ( std::size_t i = 0; i < size; i += h << 1 )
      for ( std::size_t j = i; j < i + h; ++j )
      {
        auto const u = a[j];
        auto const v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
}

/*! \brief Integer spectrum W(alpha) = sum_x f(x) (-1)^{<alpha,x>}. */
template<class T = std::int32_t>
std::vector<T> walsh_spectrum( BooleanFunction const& f )
{
  std::vector<T> a( f.num_points() );
  for ( std::uint64_t x = 0; x < a.size(); ++x )
    a[x] = f.bit( x ) ? T( -1 ) : T( 1 );
  fwht( std::span<T>( a ) );
  return a;
}

/*! \brief Fourier coefficients f^(alpha) = E_x f(x)(-1)^{<alpha,x>}, indexed by alpha. */
struct FourierSpectrum
{
  unsigned n = 0;
  std::vector<double> coeffs;

  double operator[]( std::uint64_t alpha ) const noexcept { return coeffs[alpha]; }

  double power_sum( int p ) const noexcept
  {
    double s = 0;
    for ( auto const c : coeffs )
      s += std::pow( c, p );
    return s;
  }

  /*! \brief Index of the largest |coefficient|, smallest index on ties. */
  std::uint64_t argmax_abs() const noexcept
  {
    std::uint64_t best = 0;
    for ( std::uint64_t a = 1; a < coeffs.size(); ++a )
      if ( std::abs( coeffs[a] ) > std::abs( coeffs[best] ) )
        best = a;
    return best;
  }

  double max_abs() const noexcept { return std::abs( coeffs[argmax_abs()] ); }

  /*! \brief Inverse transform: the real function sum_alpha f^(alpha)(-1)^{<alpha,x>}. */
  std::vector<double> inverse() const
  {
    auto v = coeffs;
    fwht( std::span<double>( v ) );
    return v;
  }
};

inline FourierSpectrum wht( BooleanFunction const& f )
{
  FourierSpectrum s{ f.num_vars(), std::vector<double>( f.num_points() ) };
  for ( std::uint64_t x = 0; x < s.coeffs.size(); ++x )
    s.coeffs[x] = f.bit( x ) ? -1.0 : 1.0;
  fwht( std::span<double>( s.coeffs ) );
  auto const scale = std::ldexp( 1.0, -static_cast<int>( f.num_vars() ) );
  for ( auto& c : s.coeffs )
    c *= scale;
  return s;
}

/*! \brief Fraction of points where f and g disagree. */
inline double normalized_distance( BooleanFunction const& f, BooleanFunction const& g )
{
  BooleanFunction::check_same_dims( f, g );
  return static_cast<double>( ( f * g ).minus_count() ) / static_cast<double>( f.num_points() );
}

/*! \brief <f, g> = E_x f(x) g(x) = 1 - 2 dist(f, g). */
inline double inner_product( BooleanFunction const& f, BooleanFunction const& g )
{
  BooleanFunction::check_same_dims( f, g );
  return ( f * g ).mean();
}

/*! \brief F2 quadratic polynomial g(x) = (-1)^{<x,Ax> + <x,alpha> + a}.

  A is stored strictly upper triangular: row i holds the coefficients of
  x_i x_j for j > i. A request for a square term x_i x_i lands in the
  linear part.
*/
class QuadraticPolynomial
{
public:
  explicit QuadraticPolynomial( unsigned n ) : n_( n ), upper_( n, 0u )
  {
    if ( n < 1 || n > BooleanFunction::max_vars )
      throw input_error( "number of variables must be in [1, 24], got " + std::to_string( n ) );
  }

  QuadraticPolynomial( unsigned n, std::vector<std::uint32_t> upper_rows, std::uint32_t linear, bool constant )
      : QuadraticPolynomial( n )
  {
    if ( upper_rows.size() != n )
      throw input_error( "quadratic part needs " + std::to_string( n ) + " rows" );
    for ( unsigned i = 0; i < n; ++i )
      for ( unsigned j = 0; j < n; ++j )
        if ( ( upper_rows[i] >> j ) & 1u )
          add_term( i, j );
    linear_ ^= linear & var_mask();
    constant_ = constant;
  }

  /*! \brief Upper-triangular part of a symmetric zero-diagonal matrix B (so A + A^t = B). */
  static QuadraticPolynomial from_symmetric( BitMatrix const& b, std::uint32_t linear = 0, bool constant = false )
  {
    QuadraticPolynomial q( b.rows() );
    for ( unsigned i = 0; i < b.rows(); ++i )
      q.upper_[i] = b.row( i ) & ~( ( 2u << i ) - 1u );
    q.linear_ = linear & q.var_mask();
    q.constant_ = constant;
    return q;
  }

  unsigned num_vars() const noexcept { return n_; }

  /*! \brief Toggles the monomial x_i x_j (0-based); i == j toggles x_i. */
  QuadraticPolynomial& add_term( unsigned i, unsigned j )
  {
    if ( i >= n_ || j >= n_ )
      throw input_error( "variable index out of range" );
    if ( i == j )
      linear_ ^= 1u << i;
    else
      upper_[std::min( i, j )] ^= 1u << std::max( i, j );
    return *this;
  }

  QuadraticPolynomial& add_linear( unsigned i ) { return add_term( i, i ); }
  QuadraticPolynomial& add_constant() noexcept
  {
    constant_ = !constant_;
    return *this;
  }

  bool quadratic( unsigned i, unsigned j ) const noexcept
  {
    return i != j && ( ( upper_[std::min( i, j )] >> std::max( i, j ) ) & 1u );
  }
  std::uint32_t upper_row( unsigned i ) const noexcept { return upper_[i]; }
  std::uint32_t linear() const noexcept { return linear_; }
  bool constant() const noexcept { return constant_; }

  bool evaluate_bit( std::uint64_t x ) const noexcept
  {
    auto const xs = static_cast<std::uint32_t>( x );
    bool acc = constant_ ^ parity( linear_ & xs );
    for ( unsigned i = 0; i < n_; ++i )
      if ( ( xs >> i ) & 1u )
        acc ^= parity( upper_[i] & xs );
    return acc;
  }

  int evaluate( std::uint64_t x ) const noexcept { return evaluate_bit( x ) ? -1 : 1; }

  /*! \brief B = A + A^t: symmetric with zero diagonal; f_y(x) = (-1)^{<By,x> + const}. */
  BitMatrix symmetric_form() const
  {
    BitMatrix b( n_, n_ );
    for ( unsigned i = 0; i < n_; ++i )
      for ( unsigned j = i + 1; j < n_; ++j )
        if ( quadratic( i, j ) )
        {
          b.set( i, j, true );
          b.set( j, i, true );
        }
    return b;
  }

  /*! \brief Quadratic coefficients packed row-major over pairs (0,1),(0,2),...,(n-2,n-1),
    first pair in the most significant position. Needs n <= 11. */
  std::uint64_t quadratic_code() const
  {
    if ( n_ > 11 )
      throw input_error( "quadratic_code needs n <= 11" );
    std::uint64_t code = 0;
    for ( unsigned i = 0; i < n_; ++i )
      for ( unsigned j = i + 1; j < n_; ++j )
        code = ( code << 1 ) | static_cast<std::uint64_t>( quadratic( i, j ) );
    return code;
  }

  static QuadraticPolynomial from_quadratic_code( unsigned n, std::uint64_t code )
  {
    QuadraticPolynomial q( n );
    if ( n > 11 )
      throw input_error( "quadratic_code needs n <= 11" );
    auto const pairs = n * ( n - 1 ) / 2;
    unsigned k = 0;
    for ( unsigned i = 0; i < n; ++i )
      for ( unsigned j = i + 1; j < n; ++j, ++k )
        if ( ( code >> ( pairs - 1 - k ) ) & 1u )
          q.upper_[i] |= 1u << j;
    return q;
  }

  /*! \brief Coefficient-encoding order: quadratic code, then linear vector, then constant. */
  friend auto operator<=>( QuadraticPolynomial const& a, QuadraticPolynomial const& b ) noexcept
  {
    if ( auto c = a.n_ <=> b.n_; c != 0 )
      return c;
    for ( unsigned i = 0; i < a.n_; ++i )
      for ( unsigned j = i + 1; j < a.n_; ++j )
        if ( auto c = a.quadratic( i, j ) <=> b.quadratic( i, j ); c != 0 )
          return c;
    if ( auto c = a.linear_ <=> b.linear_; c != 0 )
      return c;
    return a.constant_ <=> b.constant_;
  }
  friend bool operator==( QuadraticPolynomial const&, QuadraticPolynomial const& ) = default;

  std::string to_string() const
  {
    std::string s;
    auto append = [&]( std::string const& term ) {
      if ( !s.empty() )
        s += '+';
      s += term;
    };
    for ( unsigned i = 0; i < n_; ++i )
      for ( unsigned j = i + 1; j < n_; ++j )
        if ( quadratic( i, j ) )
          append( "x" + std::to_string( i + 1 ) + "*x" + std::to_string( j + 1 ) );
    for ( unsigned i = 0; i < n_; ++i )
      if ( ( linear_ >> i ) & 1u )
        append( "x" + std::to_string( i + 1 ) );
    if ( constant_ )
      append( "1" );
    return s.empty() ? "0" : s;
  }

private:
  std::uint32_t var_mask() const noexcept { return n_ >= 32 ? ~0u : ( ( 1u << n_ ) - 1u ); }

  unsigned n_;
  std::vector<std::uint32_t> upper_;
  std::uint32_t linear_ = 0;
  bool constant_ = false;
};

// generators -----------------------------------------------------------------

inline BooleanFunction from_quadratic( QuadraticPolynomial const& q )
{
  return BooleanFunction::tabulate( q.num_vars(), [&]( std::uint64_t x ) { return q.evaluate_bit( x ); } );
}

/*! \brief (-1)^{<a,x> + b}. */
inline BooleanFunction linear_fn( unsigned n, std::uint64_t a, bool b = false )
{
  return BooleanFunction::tabulate( n, [&]( std::uint64_t x ) { return parity( a & x ) ^ b; } );
}

/*! \brief Inner-product bent function (-1)^{x_1 x_2 + x_3 x_4 + ... + x_{n-1} x_n}. */
inline BooleanFunction inner_product_bent( unsigned n )
{
  if ( n % 2 != 0 )
    throw input_error( "inner_product_bent needs an even number of variables, got " + std::to_string( n ) );
  QuadraticPolynomial q( n );
  for ( unsigned i = 0; i + 1 < n; i += 2 )
    q.add_term( i, i + 1 );
  return from_quadratic( q );
}

/*! \brief Uniformly random function; word w of the table comes from stream (seed, w). */
inline BooleanFunction random_fn( unsigned n, std::uint64_t seed )
{
  std::vector<std::uint64_t> words( BooleanFunction::word_count( n ) );
  for ( std::size_t w = 0; w < words.size(); ++w )
    words[w] = RandomStream( seed, w )();
  return BooleanFunction( n, std::move( words ) );
}

/*! \brief Flips each point of f independently with probability `rate`. */
inline BooleanFunction noisy( BooleanFunction const& f, double rate, std::uint64_t seed )
{
  if ( !( rate >= 0.0 && rate <= 1.0 ) )
    throw input_error( "noise rate must lie in [0, 1]" );
  std::vector<std::uint64_t> words( f.words().begin(), f.words().end() );
  auto const points = f.num_points();
  for ( std::size_t w = 0; w < words.size(); ++w )
  {
    RandomStream rng( seed, w );
    auto const width = std::min<std::uint64_t>( 64, points );
    for ( unsigned b = 0; b < width; ++b )
      if ( rng.uniform() < rate )
        words[w] ^= std::uint64_t{ 1 } << b;
  }
  return BooleanFunction( f.num_vars(), std::move( words ) );
}

/*! \brief Uniformly random quadratic polynomial on n variables. */
inline QuadraticPolynomial random_quadratic( unsigned n, std::uint64_t seed )
{
  RandomStream rng( seed, 0x51ad );
  QuadraticPolynomial q( n );
  for ( unsigned i = 0; i < n; ++i )
    for ( unsigned j = i + 1; j < n; ++j )
      if ( rng.bits( 1 ) )
        q.add_term( i, j );
  for ( unsigned i = 0; i < n; ++i )
    if ( rng.bits( 1 ) )
      q.add_linear( i );
  if ( rng.bits( 1 ) )
    q.add_constant();
  return q;
}

} // namespace lowdeg
