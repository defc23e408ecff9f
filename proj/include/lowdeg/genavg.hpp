#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
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

/*! \brief A 0/1 row vector of arbitrary length (one entry per byte). */
using BitRow = std::vector<std::uint8_t>;

/*! \brief t x T matrix over F2 describing the generalized average E_A.

  Column j is the characteristic vector of the edge e_j over the t
  variables y_1..y_t, stored as a mask with bit i for row i (t <= 31).
  Immutable; the F2 rank is computed once at construction.
*/
class BinaryMatrix
{
public:
  static constexpr unsigned max_rows = 31;

  BinaryMatrix() = default;

  BinaryMatrix( unsigned rows, std::vector<std::uint32_t> columns ) : rows_( rows ), columns_( std::move( columns ) )
  {
    if ( rows > max_rows )
      throw input_error( "binary matrices support at most 31 rows, got " + std::to_string( rows ) );
    auto const mask = rows == 0 ? 0u : ( rows >= 32 ? ~0u : ( 1u << rows ) - 1u );
    for ( auto const c : columns_ )
      if ( c & ~mask )
        throw input_error( "column has bits outside the " + std::to_string( rows ) + " rows" );
    rank_ = rank_of( columns_ );
  }

  static BinaryMatrix from_rows( std::vector<BitRow> const& rows )
  {
    if ( rows.empty() )
      return BinaryMatrix( 0, {} );
    auto const width = rows.front().size();
    std::vector<std::uint32_t> cols( width, 0u );
    for ( unsigned i = 0; i < rows.size(); ++i )
    {
      if ( rows[i].size() != width )
        throw input_error( "matrix rows have different lengths" );
      for ( std::size_t j = 0; j < width; ++j )
        if ( rows[i][j] )
          cols[j] |= 1u << i;
    }
    return BinaryMatrix( static_cast<unsigned>( rows.size() ), std::move( cols ) );
  }

  unsigned rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  unsigned rank() const noexcept { return rank_; }
  bool full_row_rank() const noexcept { return rank_ == rows_; }

  std::uint32_t column( std::size_t j ) const noexcept { return columns_[j]; }
  std::span<const std::uint32_t> columns() const noexcept { return columns_; }
  bool at( unsigned i, std::size_t j ) const noexcept { return ( columns_[j] >> i ) & 1u; }

  BitRow row( unsigned i ) const
  {
    BitRow r( cols() );
    for ( std::size_t j = 0; j < cols(); ++j )
      r[j] = at( i, j );
    return r;
  }

  std::vector<BitRow> row_vectors() const
  {
    std::vector<BitRow> out;
    for ( unsigned i = 0; i < rows_; ++i )
      out.push_back( row( i ) );
    return out;
  }

  /*! \brief The row-space vector sum_i c_i row_i. */
  BitRow combination( std::uint32_t coeffs ) const
  {
    BitRow r( cols() );
    for ( std::size_t j = 0; j < cols(); ++j )
      r[j] = parity( coeffs & columns_[j] );
    return r;
  }

  unsigned max_column_weight() const noexcept
  {
    unsigned w = 0;
    for ( auto const c : columns_ )
      w = std::max( w, static_cast<unsigned>( std::popcount( c ) ) );
    return w;
  }

  bool has_zero_column() const noexcept
  {
    return std::find( columns_.begin(), columns_.end(), 0u ) != columns_.end();
  }

  bool has_duplicate_columns() const
  {
    std::set<std::uint32_t> seen( columns_.begin(), columns_.end() );
    return seen.size() != columns_.size();
  }

  std::string to_string() const
  {
    std::string s;
    for ( unsigned i = 0; i < rows_; ++i )
    {
      for ( std::size_t j = 0; j < cols(); ++j )
        s += at( i, j ) ? '1' : '0';
      s += '\n';
    }
    return s;
  }

  friend bool operator==( BinaryMatrix const& a, BinaryMatrix const& b )
  {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

private:
  unsigned rows_ = 0;
  std::vector<std::uint32_t> columns_;
  unsigned rank_ = 0;
};

inline std::size_t support_size( BitRow const& v )
{
  return static_cast<std::size_t>( std::count( v.begin(), v.end(), std::uint8_t{ 1 } ) );
}

namespace detail
{

/*! Gaussian elimination on rows of arbitrary width; returns the rank. */
inline unsigned row_rank( std::vector<BitRow> rows )
{
  if ( rows.empty() )
    return 0;
  auto const width = rows.front().size();
  unsigned rank = 0;
  for ( std::size_t c = 0; c < width && rank < rows.size(); ++c )
  {
    auto p = rank;
    while ( p < rows.size() && !rows[p][c] )
      ++p;
    if ( p == rows.size() )
      continue;
    std::swap( rows[p], rows[rank] );
    for ( std::size_t r = 0; r < rows.size(); ++r )
      if ( r != rank && rows[r][c] )
        for ( std::size_t k = c; k < width; ++k )
          rows[r][k] ^= rows[rank][k];
    ++rank;
  }
  return rank;
}

/*! Reduced row echelon form with zero rows removed. */
inline std::vector<BitRow> rref( std::vector<BitRow> rows )
{
  if ( rows.empty() )
    return rows;
  auto const width = rows.front().size();
  std::size_t rank = 0;
  for ( std::size_t c = 0; c < width && rank < rows.size(); ++c )
  {
    auto p = rank;
    while ( p < rows.size() && !rows[p][c] )
      ++p;
    if ( p == rows.size() )
      continue;
    std::swap( rows[p], rows[rank] );
    for ( std::size_t r = 0; r < rows.size(); ++r )
      if ( r != rank && rows[r][c] )
        for ( std::size_t k = c; k < width; ++k )
          rows[r][k] ^= rows[rank][k];
    ++rank;
  }
  rows.resize( rank );
  return rows;
}

inline unsigned ceil_log2_product( unsigned n, unsigned t ) { return n * t; }

} // namespace detail

/*! \brief True when `v` lies in the row space of A. */
inline bool in_row_space( BinaryMatrix const& a, BitRow const& v )
{
  if ( v.size() != a.cols() )
    return false;
  auto rows = a.row_vectors();
  rows.push_back( v );
  return detail::row_rank( std::move( rows ) ) == a.rank();
}

/*! \brief Same row space (and width): equivalence under left multiplication by a non-singular matrix. */
inline bool row_equivalent( BinaryMatrix const& a, BinaryMatrix const& b )
{
  if ( a.cols() != b.cols() )
    return false;
  return detail::rref( a.row_vectors() ) == detail::rref( b.row_vectors() );
}

/*! \brief Whether a non-zero row-space vector v is minimal (no non-zero row-space vector
  has strictly smaller support).

  Uses the hyperplane characterization: v is minimal iff the columns
  outside its support have rank rank(A) - 1.
*/
inline bool is_minimal_vector( BinaryMatrix const& a, BitRow const& v )
{
  if ( v.size() != a.cols() || support_size( v ) == 0 || !in_row_space( a, v ) )
    return false;
  std::vector<std::uint32_t> outside;
  for ( std::size_t j = 0; j < a.cols(); ++j )
    if ( !v[j] )
      outside.push_back( a.column( j ) );
  return rank_of( outside ) + 1 == a.rank();
}

/*! \brief All non-zero row-space vectors with inclusion-minimal support,
  sorted lexicographically. Enumerates the 2^t row combinations (t <= 20). */
inline std::vector<BitRow> row_space_minimal_vectors( BinaryMatrix const& a )
{
  if ( a.rows() > 20 )
    throw resource_error( "row_space_minimal_vectors enumerates 2^t combinations; t=" + std::to_string( a.rows() ) +
                          " exceeds the limit t <= 20" );
  std::set<BitRow> found;
  for ( std::uint32_t c = 1; c < ( std::uint32_t{ 1 } << a.rows() ); ++c )
  {
    auto v = a.combination( c );
    if ( support_size( v ) == 0 || found.contains( v ) )
      continue;
    std::vector<std::uint32_t> outside;
    for ( std::size_t j = 0; j < a.cols(); ++j )
      if ( !v[j] )
        outside.push_back( a.column( j ) );
    if ( rank_of( outside ) + 1 == a.rank() )
      found.insert( std::move( v ) );
  }
  return { found.begin(), found.end() };
}

/*! \brief The (k+1) x 2^k matrix A_k, columns in lexicographic order.

  Row k is all ones; column j carries the k-bit binary expansion of j in
  rows 0..k-1, most significant bit in row 0. E_{A_k}(f) = ||f||_{U_k}^{2^k}.
*/
inline BinaryMatrix ak_matrix( unsigned k )
{
  if ( k < 1 || k > 20 )
    throw input_error( "ak_matrix needs 1 <= k <= 20" );
  std::vector<std::uint32_t> cols( std::size_t{ 1 } << k );
  for ( std::uint32_t j = 0; j < cols.size(); ++j )
  {
    std::uint32_t c = 1u << k;
    for ( unsigned i = 0; i < k; ++i )
      c |= ( ( j >> ( k - 1 - i ) ) & 1u ) << i;
    cols[j] = c;
  }
  return BinaryMatrix( k + 1, std::move( cols ) );
}

/*! \brief Cancels pairs of identical columns and removes all-zero rows.

  Both preserve E_A(f) for boolean f: f^2 = 1, and an unused variable
  averages out. A column of odd multiplicity keeps its first occurrence.
*/
inline BinaryMatrix simplify( BinaryMatrix const& a )
{
  std::map<std::uint32_t, std::size_t> multiplicity;
  for ( auto const c : a.columns() )
    ++multiplicity[c];
  std::vector<std::uint32_t> kept;
  std::set<std::uint32_t> emitted;
  for ( auto const c : a.columns() )
    if ( multiplicity[c] % 2 == 1 && emitted.insert( c ).second )
      kept.push_back( c );

  std::uint32_t used = 0;
  for ( auto const c : kept )
    used |= c;
  std::vector<unsigned> row_map;
  for ( unsigned i = 0; i < a.rows(); ++i )
    if ( ( used >> i ) & 1u )
      row_map.push_back( i );
  for ( auto& c : kept )
  {
    std::uint32_t packed = 0;
    for ( unsigned r = 0; r < row_map.size(); ++r )
      packed |= ( ( c >> row_map[r] ) & 1u ) << r;
    c = packed;
  }
  return BinaryMatrix( static_cast<unsigned>( row_map.size() ), std::move( kept ) );
}

/*! \brief Keeps a basis of the rows, scanning from the last row upward; row order is preserved.

  The result has full row rank and the same row space, hence the same
  average.
*/
inline BinaryMatrix row_reduce( BinaryMatrix const& a )
{
  std::vector<BitRow> kept_rows;
  std::vector<unsigned> keep;
  for ( unsigned i = a.rows(); i-- > 0; )
  {
    auto candidate = kept_rows;
    candidate.push_back( a.row( i ) );
    if ( detail::row_rank( candidate ) == candidate.size() )
    {
      kept_rows = std::move( candidate );
      keep.push_back( i );
    }
  }
  std::reverse( keep.begin(), keep.end() );
  std::vector<std::uint32_t> cols( a.cols(), 0u );
  for ( std::size_t j = 0; j < a.cols(); ++j )
    for ( unsigned r = 0; r < keep.size(); ++r )
      cols[j] |= ( ( a.column( j ) >> keep[r] ) & 1u ) << r;
  return BinaryMatrix( static_cast<unsigned>( keep.size() ), std::move( cols ) );
}

/*! \brief Multiplies A on the left by a t x t matrix M (row i of M as a mask over rows of A). */
inline BinaryMatrix left_multiply( BitMatrix const& m, BinaryMatrix const& a )
{
  if ( m.cols() != a.rows() )
    throw input_error( "left_multiply dimension mismatch" );
  std::vector<std::uint32_t> cols( a.cols() );
  for ( std::size_t j = 0; j < a.cols(); ++j )
    cols[j] = m.apply( a.column( j ) );
  return BinaryMatrix( m.rows(), std::move( cols ) );
}

/*! \brief If A is A_k up to row operations and column order, returns k.

  Equivalent to: after row reduction, t = k + 1 rows, 2^k distinct columns,
  all lying on one affine hyperplane {x : <a, x> = 1}.
*/
inline std::optional<unsigned> matches_ak( BinaryMatrix const& a )
{
  auto const r = row_reduce( a );
  if ( r.rows() < 2 || a.has_duplicate_columns() )
    return std::nullopt;
  auto const k = r.rows() - 1;
  if ( r.cols() != ( std::size_t{ 1 } << k ) )
    return std::nullopt;
  if ( !in_row_space( r, BitRow( r.cols(), 1 ) ) )
    return std::nullopt;
  return k;
}

/*! \brief Explicit witness for matches_ak: transforms A by an invertible row
  operation and sorts its columns; the result equals ak_matrix(k) exactly. */
inline std::optional<BinaryMatrix> ak_normal_form( BinaryMatrix const& a )
{
  auto const k = matches_ak( a );
  if ( !k )
    return std::nullopt;
  auto const r = row_reduce( a );
  auto const t = r.rows();
  // functional `ones` with <ones, column> = 1 for every column
  std::optional<std::uint32_t> ones;
  for ( std::uint32_t c = 1; c < ( 1u << t ) && !ones; ++c )
  {
    bool all = true;
    for ( auto const col : r.columns() )
      all = all && parity( c & col );
    if ( all )
      ones = c;
  }
  if ( !ones )
    return std::nullopt;
  EchelonBasis basis;
  basis.insert( *ones );
  std::vector<std::uint32_t> m_rows;
  for ( unsigned i = 0; i < t && m_rows.size() + 1 < t; ++i )
    if ( basis.insert( 1u << i ) )
      m_rows.push_back( 1u << i );
  m_rows.push_back( *ones );
  auto const transformed = left_multiply( BitMatrix( t, m_rows ), r );
  auto code = [t]( std::uint32_t col ) {
    std::uint32_t v = 0;
    for ( unsigned i = 0; i < t; ++i )
      v = ( v << 1 ) | ( ( col >> i ) & 1u );
    return v;
  };
  std::vector<std::uint32_t> cols( transformed.columns().begin(), transformed.columns().end() );
  std::sort( cols.begin(), cols.end(), [&]( auto x, auto y ) { return code( x ) < code( y ); } );
  return BinaryMatrix( t, std::move( cols ) );
}

/*! \brief One Cauchy-Schwarz step. For a minimal row-space vector v of a
  full-rank A, restricts to the columns in supp(v) (giving B) and returns

      [ B      | B      ]
      [ 1...1  | 0...0  ]

  which satisfies |E_A(f)| <= sqrt(E_{A'}(f)) for every boolean f.
*/
inline BinaryMatrix reduction_step( BinaryMatrix const& a, BitRow const& v )
{
  if ( !a.full_row_rank() )
    throw input_error( "reduction_step needs a matrix of full row rank" );
  if ( a.rows() + 1 > BinaryMatrix::max_rows )
    throw input_error( "reduction_step would exceed the row limit" );
  if ( v.size() != a.cols() )
    throw input_error( "vector length " + std::to_string( v.size() ) + " does not match " +
                       std::to_string( a.cols() ) + " columns" );
  if ( !in_row_space( a, v ) )
    throw input_error( "vector is not in the row space of the matrix" );
  if ( !is_minimal_vector( a, v ) )
    throw input_error( "vector is not a minimal row-space vector" );
  std::vector<std::uint32_t> cols;
  auto const top = 1u << a.rows();
  for ( std::size_t j = 0; j < a.cols(); ++j )
    if ( v[j] )
      cols.push_back( a.column( j ) | top );
  for ( std::size_t j = 0; j < a.cols(); ++j )
    if ( v[j] )
      cols.push_back( a.column( j ) );
  return BinaryMatrix( a.rows() + 1, std::move( cols ) );
}

// averages ---------------------------------------------------------------------

/*! \brief Exact E_A(f) = E_{y_1..y_t} prod_j f(sum_{i in e_j} y_i) by enumerating
  all 2^{n t} assignments. Zero columns contribute f(0) each.

  Throws resource_error when n * t exceeds `max_log2_assignments`.
*/
inline double generalized_average_exact( BinaryMatrix const& a, BooleanFunction const& f,
                                         unsigned max_log2_assignments = 26 )
{
  auto const n = f.num_vars();
  auto const t = a.rows();
  if ( n * t > max_log2_assignments )
    throw resource_error( "exact generalized average enumerates 2^(n*t) = 2^" + std::to_string( n * t ) +
                          " assignments, over the limit 2^" + std::to_string( max_log2_assignments ) +
                          "; use generalized_average_estimate" );
  if ( t == 0 )
    return ( a.cols() % 2 == 1 && f.bit( 0 ) ) ? -1.0 : 1.0;

  auto const mask = f.point_mask();
  auto const last = 1u << ( t - 1 );
  std::vector<std::uint32_t> fixed, moving;
  for ( auto const c : a.columns() )
    ( c & last ? moving : fixed ).push_back( c & ~last );

  auto const outer = std::uint64_t{ 1 } << ( n * ( t - 1 ) );
  auto const inner = std::uint64_t{ 1 } << n;
  auto const minus = parallel_reduce(
      outer, std::uint64_t{ 0 },
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        std::uint64_t count = 0;
        std::vector<std::uint64_t> ys( t, 0 ), partial( moving.size() );
        for ( auto o = lo; o < hi; ++o )
        {
          for ( unsigned i = 0; i + 1 < t; ++i )
            ys[i] = ( o >> ( n * i ) ) & mask;
          auto sum_of = [&]( std::uint32_t c ) {
            std::uint64_t p = 0;
            for ( ; c; c &= c - 1 )
              p ^= ys[std::countr_zero( c )];
            return p;
          };
          bool base = false;
          for ( auto const c : fixed )
            base ^= f.bit( sum_of( c ) );
          for ( std::size_t j = 0; j < moving.size(); ++j )
            partial[j] = sum_of( moving[j] );
          for ( std::uint64_t y = 0; y < inner; ++y )
          {
            bool acc = base;
            for ( auto const p : partial )
              acc ^= f.bit( p ^ y );
            count += acc;
          }
        }
        return count;
      },
      []( std::uint64_t x, std::uint64_t y ) { return x + y; } );
  auto const total = static_cast<double>( outer ) * static_cast<double>( inner );
  return ( total - 2.0 * static_cast<double>( minus ) ) / total;
}

struct AverageEstimate
{
  double value = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool std_error_available = false;
};

/*! \brief Monte-Carlo E_A(f); trial i draws y_1..y_t from stream (seed, i). */
inline AverageEstimate generalized_average_estimate( BinaryMatrix const& a, BooleanFunction const& f,
                                                     std::uint64_t trials, std::uint64_t seed )
{
  if ( trials < 1 )
    throw input_error( "trials must be at least 1" );
  auto const n = f.num_vars();
  auto const t = a.rows();
  auto const minus = parallel_reduce(
      trials, std::uint64_t{ 0 },
      [&]( std::uint64_t lo, std::uint64_t hi ) {
        std::uint64_t count = 0;
        std::vector<std::uint64_t> ys( t );
        for ( auto trial = lo; trial < hi; ++trial )
        {
          RandomStream rng( seed, trial );
          for ( auto& y : ys )
            y = rng.bits( n );
          bool acc = false;
          for ( auto c : a.columns() )
          {
            std::uint64_t p = 0;
            for ( ; c; c &= c - 1 )
              p ^= ys[std::countr_zero( c )];
            acc ^= f.bit( p );
          }
          count += acc;
        }
        return count;
      },
      []( std::uint64_t x, std::uint64_t y ) { return x + y; } );
  auto const [mean, se] = detail::sign_sample_stats( trials, minus );
  return { mean, se, trials, seed, trials >= 2 };
}

// reduction to A_k -------------------------------------------------------------

/*! \brief The reduction procedure could not complete its chain. */
class reduction_stalled : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ReductionStep
{
  BinaryMatrix input;    //!< full row rank
  BitRow minimal_vector; //!< minimal vector of `input` the step expands along
  BinaryMatrix expanded; //!< reduction_step(input, minimal_vector)
  BinaryMatrix output;   //!< row_reduce(expanded)
};

/*! \brief Chain A -> A' -> ... -> A_k proving |E_A(f)| <= ||f||_{U_k}.

  Each step squares the bound, so |E_A(f)| <= E_{terminal}(f)^{1/exponent}
  with exponent = 2^{steps}. The terminal matrix is A_k up to row
  operations and column order, and steps <= terminal_k, hence
  |E_A(f)| <= ||f||_{U_k}^{2^k / exponent} <= ||f||_{U_k}.
*/
struct ReductionCertificate
{
  BinaryMatrix original;
  BinaryMatrix start; //!< row_reduce(original)
  std::vector<ReductionStep> steps;
  unsigned terminal_k = 0;
  std::uint64_t exponent = 1;

  BinaryMatrix const& terminal() const { return steps.empty() ? start : steps.back().output; }

  /*! \brief Right-hand side of the certified inequality for a given f. */
  double bound( BooleanFunction const& f ) const
  {
    auto const p = gowers_power_exact( f, terminal_k );
    return std::pow( std::max( 0.0, p ), 1.0 / static_cast<double>( exponent ) );
  }
};

namespace detail
{

inline std::string canonical_key( BinaryMatrix const& a )
{
  std::vector<std::uint32_t> cols( a.columns().begin(), a.columns().end() );
  std::sort( cols.begin(), cols.end() );
  auto const sorted = BinaryMatrix( a.rows(), cols );
  std::string key;
  for ( auto const& r : rref( sorted.row_vectors() ) )
  {
    for ( auto b : r )
      key += b ? '1' : '0';
    key += '/';
  }
  return key;
}

/*! Candidate vectors in preference order: first the one obtained from the
  first row (itself if minimal, else the smallest minimal vector inside its
  support), then every other minimal vector. */
inline std::vector<BitRow> ordered_candidates( BinaryMatrix const& a )
{
  auto all = row_space_minimal_vectors( a );
  std::stable_sort( all.begin(), all.end(),
                    []( BitRow const& x, BitRow const& y ) { return support_size( x ) < support_size( y ); } );
  std::vector<BitRow> ordered;
  if ( a.rows() > 0 )
  {
    auto const u = a.row( 0 );
    auto inside = [&]( BitRow const& v ) {
      for ( std::size_t j = 0; j < v.size(); ++j )
        if ( v[j] && !u[j] )
          return false;
      return true;
    };
    if ( std::find( all.begin(), all.end(), u ) != all.end() )
      ordered.push_back( u );
    else
      for ( auto const& v : all )
        if ( inside( v ) )
        {
          ordered.push_back( v );
          break;
        }
  }
  for ( auto const& v : all )
    if ( std::find( ordered.begin(), ordered.end(), v ) == ordered.end() )
      ordered.push_back( v );
  return ordered;
}

struct ReductionSearch
{
  unsigned max_k = 1;
  std::size_t expansions = 0;
  std::size_t expansion_limit = 200000;
  std::map<std::string, unsigned> dead_at; // key -> fewest steps at which the subtree failed

  std::optional<std::pair<std::vector<ReductionStep>, unsigned>> run( BinaryMatrix const& a, unsigned steps )
  {
    if ( auto const j = matches_ak( a ); j && steps <= *j && *j <= max_k )
      return std::pair{ std::vector<ReductionStep>{}, *j };
    if ( steps >= max_k )
      return std::nullopt;
    auto const key = canonical_key( a );
    if ( auto it = dead_at.find( key ); it != dead_at.end() && it->second <= steps )
      return std::nullopt;
    if ( a.rows() + 1 > BinaryMatrix::max_rows || a.rows() > 20 )
      return std::nullopt;
    for ( auto const& v : ordered_candidates( a ) )
    {
      if ( ++expansions > expansion_limit )
        throw reduction_stalled( "reduction search exceeded " + std::to_string( expansion_limit ) + " expansions" );
      auto expanded = reduction_step( a, v );
      auto output = row_reduce( expanded );
      if ( auto rest = run( output, steps + 1 ) )
      {
        rest->first.insert( rest->first.begin(), ReductionStep{ a, v, std::move( expanded ), std::move( output ) } );
        return rest;
      }
    }
    dead_at[key] = steps;
    return std::nullopt;
  }
};

} // namespace detail

/*! \brief Builds a certificate that |E_A(f)| <= ||f||_{U_k} for all boolean f,
  where k is the largest column weight of A.

  Columns must be distinct and non-zero (cancel duplicates with
  `simplify` first). The chain expands along minimal vectors, preferring
  the vector derived from the current first row, and searches the other
  minimal vectors when that choice does not lead to an A_j. Proven for
  k <= 3; for larger k the same loop runs and reduction_stalled is thrown
  if it cannot finish.
*/
inline ReductionCertificate reduce_to_uk( BinaryMatrix const& a )
{
  if ( a.cols() == 0 )
    throw input_error( "reduce_to_uk needs at least one column" );
  if ( a.has_zero_column() )
    throw input_error( "matrix has an all-zero column; zero columns only contribute a sign f(0)" );
  if ( a.has_duplicate_columns() )
    throw input_error( "matrix has duplicate columns; cancel them first with simplify" );
  ReductionCertificate cert;
  cert.original = a;
  cert.start = row_reduce( a );
  detail::ReductionSearch search;
  search.max_k = std::max( 1u, a.max_column_weight() );
  auto found = search.run( cert.start, 0 );
  if ( !found )
    throw reduction_stalled( "no reduction chain reaches an A_k with k <= " + std::to_string( search.max_k ) );
  cert.steps = std::move( found->first );
  cert.terminal_k = found->second;
  cert.exponent = std::uint64_t{ 1 } << cert.steps.size();
  return cert;
}

/*! \brief Replays a certificate: every step recomputed, every minimal vector
  re-checked, terminal matched against ak_matrix(terminal_k). */
inline bool verify_certificate( ReductionCertificate const& cert )
{
  auto const& a = cert.original;
  if ( a.has_zero_column() || a.has_duplicate_columns() )
    return false;
  if ( !( cert.start == row_reduce( a ) ) || !row_equivalent( cert.start, a ) )
    return false;
  auto const* current = &cert.start;
  for ( auto const& step : cert.steps )
  {
    if ( !( step.input == *current ) || !is_minimal_vector( step.input, step.minimal_vector ) )
      return false;
    if ( !( step.expanded == reduction_step( step.input, step.minimal_vector ) ) )
      return false;
    if ( !( step.output == row_reduce( step.expanded ) ) || !row_equivalent( step.output, step.expanded ) )
      return false;
    current = &step.output;
  }
  if ( cert.exponent != ( std::uint64_t{ 1 } << cert.steps.size() ) )
    return false;
  if ( cert.steps.size() > cert.terminal_k || cert.terminal_k > std::max( 1u, a.max_column_weight() ) )
    return false;
  auto const normal = ak_normal_form( *current );
  return normal && *normal == ak_matrix( cert.terminal_k );
}

/*! \brief Human-readable listing of every matrix in the chain. */
inline std::string certificate_report( ReductionCertificate const& cert )
{
  auto vec = []( BitRow const& v ) {
    std::string s;
    for ( auto b : v )
      s += b ? '1' : '0';
    return s;
  };
  std::string out;
  out += "original " + std::to_string( cert.original.rows() ) + "x" + std::to_string( cert.original.cols() ) + "\n" +
         cert.original.to_string();
  out += "start (dependent rows removed)\n" + cert.start.to_string();
  for ( std::size_t i = 0; i < cert.steps.size(); ++i )
  {
    auto const& s = cert.steps[i];
    out += "step " + std::to_string( i + 1 ) + " minimal vector " + vec( s.minimal_vector ) + "\n";
    out += "expanded\n" + s.expanded.to_string();
    out += "reduced\n" + s.output.to_string();
  }
  out += "terminal_k " + std::to_string( cert.terminal_k ) + "\n";
  out += "exponent " + std::to_string( cert.exponent ) + "\n";
  out += "bound |E_A(f)| <= E_{A_" + std::to_string( cert.terminal_k ) + "}(f)^(1/" +
         std::to_string( cert.exponent ) + ") <= ||f||_U" + std::to_string( cert.terminal_k ) + "\n";
  return out;
}

} // namespace lowdeg
