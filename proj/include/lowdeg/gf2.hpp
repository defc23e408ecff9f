#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lowdeg
{

inline constexpr bool parity( std::uint64_t x ) noexcept
{
  return std::popcount( x ) & 1;
}

/*! \brief Incremental echelon basis of vectors in F2^w, w <= 32.

  Each stored pivot vector has a distinct leading bit; `reduce` clears
  pivot bits from a query vector.
*/
class EchelonBasis
{
public:
  std::uint32_t reduce( std::uint32_t v ) const noexcept
  {
    for ( auto const p : pivots_ )
      if ( v & std::bit_floor( p ) )
        v ^= p;
    return v;
  }

  /*! \brief Adds `v`; returns false if it was already in the span. */
  bool insert( std::uint32_t v )
  {
    v = reduce( v );
    if ( v == 0 )
      return false;
    auto const lead = std::bit_floor( v );
    for ( auto& p : pivots_ )
      if ( p & lead )
        p ^= v;
    pivots_.push_back( v );
    return true;
  }

  bool contains( std::uint32_t v ) const noexcept { return reduce( v ) == 0; }
  unsigned dimension() const noexcept { return static_cast<unsigned>( pivots_.size() ); }

private:
  std::vector<std::uint32_t> pivots_;
};

inline unsigned rank_of( std::span<const std::uint32_t> vectors )
{
  EchelonBasis basis;
  for ( auto const v : vectors )
    basis.insert( v );
  return basis.dimension();
}

/*! \brief Dense matrix over F2 with at most 32 columns, stored row-major as bit masks.

  Bit j of row i is entry (i, j). Vectors are column vectors encoded as
  masks, so `apply(x)` has bit i equal to <row_i, x>.
*/
class BitMatrix
{
public:
  BitMatrix() = default;

  BitMatrix( unsigned rows, unsigned cols ) : cols_( cols ), rows_( rows, 0u )
  {
    if ( cols > 32 )
      throw input_error( "BitMatrix supports at most 32 columns, got " + std::to_string( cols ) );
  }

  BitMatrix( unsigned cols, std::vector<std::uint32_t> rows ) : cols_( cols ), rows_( std::move( rows ) )
  {
    if ( cols > 32 )
      throw input_error( "BitMatrix supports at most 32 columns, got " + std::to_string( cols ) );
    for ( auto& r : rows_ )
      r &= column_mask();
  }

  static BitMatrix identity( unsigned n )
  {
    BitMatrix m( n, n );
    for ( unsigned i = 0; i < n; ++i )
      m.rows_[i] = 1u << i;
    return m;
  }

  /*! \brief Matrix whose j-th column is `columns[j]`. */
  static BitMatrix from_columns( unsigned rows, std::span<const std::uint32_t> columns )
  {
    BitMatrix m( rows, static_cast<unsigned>( columns.size() ) );
    for ( unsigned j = 0; j < columns.size(); ++j )
      for ( unsigned i = 0; i < rows; ++i )
        if ( ( columns[j] >> i ) & 1u )
          m.rows_[i] |= 1u << j;
    return m;
  }

  unsigned rows() const noexcept { return static_cast<unsigned>( rows_.size() ); }
  unsigned cols() const noexcept { return cols_; }

  bool at( unsigned i, unsigned j ) const noexcept { return ( rows_[i] >> j ) & 1u; }
  void set( unsigned i, unsigned j, bool value ) noexcept
  {
    if ( value )
      rows_[i] |= 1u << j;
    else
      rows_[i] &= ~( 1u << j );
  }

  std::uint32_t row( unsigned i ) const noexcept { return rows_[i]; }
  std::span<const std::uint32_t> row_masks() const noexcept { return rows_; }

  std::uint32_t column( unsigned j ) const noexcept
  {
    std::uint32_t c = 0;
    for ( unsigned i = 0; i < rows(); ++i )
      c |= ( ( rows_[i] >> j ) & 1u ) << i;
    return c;
  }

  std::uint32_t apply( std::uint32_t x ) const noexcept
  {
    std::uint32_t y = 0;
    for ( unsigned i = 0; i < rows(); ++i )
      y |= static_cast<std::uint32_t>( parity( rows_[i] & x ) ) << i;
    return y;
  }

  BitMatrix transpose() const
  {
    BitMatrix t( cols_, rows() );
    for ( unsigned j = 0; j < cols_; ++j )
      t.rows_[j] = column( j );
    return t;
  }

  friend BitMatrix operator*( BitMatrix const& a, BitMatrix const& b )
  {
    if ( a.cols() != b.rows() )
      throw input_error( "BitMatrix product dimension mismatch" );
    BitMatrix c( a.rows(), b.cols() );
    for ( unsigned i = 0; i < a.rows(); ++i )
    {
      std::uint32_t acc = 0;
      for ( unsigned k = 0; k < a.cols(); ++k )
        if ( a.at( i, k ) )
          acc ^= b.rows_[k];
      c.rows_[i] = acc;
    }
    return c;
  }

  friend BitMatrix operator+( BitMatrix const& a, BitMatrix const& b )
  {
    if ( a.rows() != b.rows() || a.cols() != b.cols() )
      throw input_error( "BitMatrix sum dimension mismatch" );
    BitMatrix c = a;
    for ( unsigned i = 0; i < a.rows(); ++i )
      c.rows_[i] ^= b.rows_[i];
    return c;
  }

  friend bool operator==( BitMatrix const&, BitMatrix const& ) = default;

  unsigned rank() const { return rank_of( rows_ ); }

  bool is_symmetric() const
  {
    return rows() == cols_ && *this == transpose();
  }

  std::uint32_t diagonal() const noexcept
  {
    std::uint32_t d = 0;
    for ( unsigned i = 0; i < rows() && i < cols_; ++i )
      d |= ( ( rows_[i] >> i ) & 1u ) << i;
    return d;
  }

  /*! \brief Inverse of a square matrix, or nullopt when singular. */
  std::optional<BitMatrix> inverse() const
  {
    if ( rows() != cols_ )
      throw input_error( "inverse of a non-square BitMatrix" );
    auto const n = cols_;
    auto a = rows_;
    auto inv = identity( n ).rows_;
    for ( unsigned c = 0; c < n; ++c )
    {
      unsigned p = c;
      while ( p < n && !( ( a[p] >> c ) & 1u ) )
        ++p;
      if ( p == n )
        return std::nullopt;
      std::swap( a[p], a[c] );
      std::swap( inv[p], inv[c] );
      for ( unsigned r = 0; r < n; ++r )
        if ( r != c && ( ( a[r] >> c ) & 1u ) )
        {
          a[r] ^= a[c];
          inv[r] ^= inv[c];
        }
    }
    return BitMatrix( n, std::move( inv ) );
  }

  std::string to_string() const
  {
    std::string s;
    for ( unsigned i = 0; i < rows(); ++i )
    {
      for ( unsigned j = 0; j < cols_; ++j )
        s += at( i, j ) ? '1' : '0';
      s += '\n';
    }
    return s;
  }

private:
  std::uint32_t column_mask() const noexcept
  {
    return cols_ >= 32 ? ~0u : ( ( 1u << cols_ ) - 1u );
  }

  unsigned cols_ = 0;
  std::vector<std::uint32_t> rows_;
};

/*! \brief Extends independent vectors in F2^n to a full basis, adding unit
  vectors greedily in lexicographic (increasing index) order. */
inline std::vector<std::uint32_t> extend_to_basis( std::vector<std::uint32_t> vectors, unsigned n )
{
  EchelonBasis basis;
  for ( auto const v : vectors )
    if ( !basis.insert( v ) )
      throw input_error( "extend_to_basis: input vectors are dependent" );
  for ( unsigned i = 0; i < n && basis.dimension() < n; ++i )
    if ( basis.insert( 1u << i ) )
      vectors.push_back( 1u << i );
  return vectors;
}

/*! \brief Basis of the null space {x : M x = 0} of a matrix with `cols` columns. */
inline std::vector<std::uint32_t> kernel_basis( BitMatrix const& m )
{
  auto const n = m.cols();
  // reduced row echelon form, remembering pivot columns
  std::vector<std::uint32_t> a( m.row_masks().begin(), m.row_masks().end() );
  std::vector<int> pivot_row( n, -1 );
  unsigned r = 0;
  for ( unsigned c = 0; c < n && r < a.size(); ++c )
  {
    unsigned p = r;
    while ( p < a.size() && !( ( a[p] >> c ) & 1u ) )
      ++p;
    if ( p == a.size() )
      continue;
    std::swap( a[p], a[r] );
    for ( unsigned i = 0; i < a.size(); ++i )
      if ( i != r && ( ( a[i] >> c ) & 1u ) )
        a[i] ^= a[r];
    pivot_row[c] = static_cast<int>( r );
    ++r;
  }
  std::vector<std::uint32_t> basis;
  for ( unsigned free = 0; free < n; ++free )
  {
    if ( pivot_row[free] >= 0 )
      continue;
    std::uint32_t v = 1u << free;
    for ( unsigned c = 0; c < n; ++c )
      if ( pivot_row[c] >= 0 && ( ( a[pivot_row[c]] >> free ) & 1u ) )
        v |= 1u << c;
    basis.push_back( v );
  }
  return basis;
}

} // namespace lowdeg
