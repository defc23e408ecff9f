#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "boolean_function.hpp"
#include "errors.hpp"
#include "genavg.hpp"
#include "hom.hpp"
#include "testers.hpp"

namespace lowdeg::io
{

/*! \brief 64-bit FNV-1a digest, used to identify input files in run records. */
inline std::uint64_t fnv1a( std::string_view data )
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for ( auto const c : data )
  {
    h ^= static_cast<unsigned char>( c );
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw input_error( "cannot open '" + path + "'" );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file( std::string const& path, std::string const& contents )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw input_error( "cannot write '" + path + "'" );
  out << contents;
}

namespace detail
{

struct Line
{
  std::size_t number;
  std::string text;
};

inline std::string trim( std::string const& s )
{
  auto b = s.find_first_not_of( " \t\r" );
  if ( b == std::string::npos )
    return {};
  auto e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1 );
}

/*! Non-blank lines that do not start with '#', trimmed, with 1-based numbers. */
inline std::vector<Line> content_lines( std::string const& text )
{
  std::vector<Line> out;
  std::istringstream in( text );
  std::string line;
  std::size_t number = 0;
  while ( std::getline( in, line ) )
  {
    ++number;
    auto t = trim( line );
    if ( t.empty() || t[0] == '#' )
      continue;
    out.push_back( { number, std::move( t ) } );
  }
  return out;
}

[[noreturn]] inline void fail( std::string const& source, std::size_t line, std::string const& what )
{
  throw input_error( source + ":" + std::to_string( line ) + ": " + what );
}

inline unsigned parse_header( std::string const& source, Line const& line, char key, unsigned lo, unsigned hi )
{
  auto const& t = line.text;
  std::string const prefix = std::string( 1, key ) + "=";
  if ( t.rfind( prefix, 0 ) != 0 )
    fail( source, line.number, "expected '" + prefix + "<number>', got '" + t + "'" );
  auto const digits = trim( t.substr( 2 ) );
  if ( digits.empty() || digits.find_first_not_of( "0123456789" ) != std::string::npos || digits.size() > 3 )
    fail( source, line.number, "'" + digits + "' is not a number" );
  auto const v = static_cast<unsigned>( std::stoul( digits ) );
  if ( v < lo || v > hi )
    fail( source, line.number,
          std::string( 1, key ) + "=" + digits + " outside [" + std::to_string( lo ) + ", " + std::to_string( hi ) + "]" );
  return v;
}

inline bool is_bit_string( std::string const& s )
{
  return !s.empty() && s.find_first_not_of( "01" ) == std::string::npos;
}

} // namespace detail

/*! \brief Parses `x1*x2+x3+1` (degree at most 2, variables 1-based, `0`/`1` constants). */
inline QuadraticPolynomial parse_polynomial( unsigned n, std::string const& expr, std::string const& source = "<expr>",
                                             std::size_t line = 1 )
{
  QuadraticPolynomial q( n );
  std::string s;
  for ( auto const c : expr )
    if ( !std::isspace( static_cast<unsigned char>( c ) ) )
      s += c;
  if ( s.empty() )
    detail::fail( source, line, "empty polynomial" );
  std::size_t pos = 0;
  while ( pos <= s.size() )
  {
    auto const end = std::min( s.find( '+', pos ), s.size() );
    auto const term = s.substr( pos, end - pos );
    if ( term.empty() )
      detail::fail( source, line, "empty term in '" + expr + "'" );
    std::vector<unsigned> vars;
    bool zero = false;
    std::size_t fp = 0;
    while ( fp <= term.size() )
    {
      auto const fe = std::min( term.find( '*', fp ), term.size() );
      auto const factor = term.substr( fp, fe - fp );
      if ( factor == "1" )
        ;
      else if ( factor == "0" )
        zero = true;
      else if ( factor.size() >= 2 && ( factor[0] == 'x' || factor[0] == 'X' ) &&
                factor.find_first_not_of( "0123456789", 1 ) == std::string::npos && factor.size() <= 4 )
      {
        auto const v = static_cast<unsigned>( std::stoul( factor.substr( 1 ) ) );
        if ( v < 1 || v > n )
          detail::fail( source, line, "variable " + factor + " outside x1..x" + std::to_string( n ) );
        vars.push_back( v - 1 );
      }
      else
        detail::fail( source, line, "cannot parse factor '" + factor + "'" );
      fp = fe + 1;
    }
    // x_i * x_i = x_i over F2
    std::sort( vars.begin(), vars.end() );
    vars.erase( std::unique( vars.begin(), vars.end() ), vars.end() );
    if ( vars.size() > 2 )
      detail::fail( source, line, "term '" + term + "' has degree above 2" );
    if ( !zero )
    {
      if ( vars.empty() )
        q.add_constant();
      else if ( vars.size() == 1 )
        q.add_linear( vars[0] );
      else
        q.add_term( vars[0], vars[1] );
    }
    pos = end + 1;
  }
  return q;
}

/*! \brief Truth-table file: `n=<k>` then either 2^k characters from {0,1}
  (bit b at index i means f(x_i) = (-1)^b) or a polynomial of degree at most 2. */
inline BooleanFunction parse_function( std::string const& text, std::string const& source = "<input>" )
{
  auto const lines = detail::content_lines( text );
  if ( lines.empty() )
    detail::fail( source, 1, "missing 'n=<k>' header" );
  auto const n = detail::parse_header( source, lines[0], 'n', 1, BooleanFunction::max_vars );
  if ( lines.size() < 2 )
    detail::fail( source, lines[0].number + 1, "missing truth table or polynomial after the header" );
  std::string body;
  for ( std::size_t i = 1; i < lines.size(); ++i )
    body += lines[i].text;
  auto const& first = lines[1];
  auto const expected = std::uint64_t{ 1 } << n;
  if ( detail::is_bit_string( body ) && ( body.size() > 1 || lines.size() > 2 ) )
  {
    if ( body.size() != expected )
      detail::fail( source, first.number,
                    "truth table for n=" + std::to_string( n ) + " needs " + std::to_string( expected ) +
                        " bits, got " + std::to_string( body.size() ) );
    return BooleanFunction::tabulate( n, [&]( std::uint64_t x ) { return body[x] == '1'; } );
  }
  if ( lines.size() > 2 )
    detail::fail( source, lines[2].number, "unexpected extra line after the polynomial" );
  return from_quadratic( parse_polynomial( n, first.text, source, first.number ) );
}

inline std::string format_function( BooleanFunction const& f )
{
  return "n=" + std::to_string( f.num_vars() ) + "\n" + f.to_bit_string() + "\n";
}

/*! \brief Matrix file: t lines of T characters from {0,1}. */
inline BinaryMatrix parse_matrix( std::string const& text, std::string const& source = "<input>" )
{
  auto const lines = detail::content_lines( text );
  if ( lines.empty() )
    detail::fail( source, 1, "empty matrix file" );
  if ( lines.size() > BinaryMatrix::max_rows )
    detail::fail( source, lines[BinaryMatrix::max_rows].number, "more than 31 rows" );
  std::vector<BitRow> rows;
  for ( auto const& l : lines )
  {
    if ( !detail::is_bit_string( l.text ) )
      detail::fail( source, l.number, "row must contain only 0 and 1, got '" + l.text + "'" );
    if ( !rows.empty() && l.text.size() != rows.front().size() )
      detail::fail( source, l.number,
                    "row has " + std::to_string( l.text.size() ) + " entries, expected " +
                        std::to_string( rows.front().size() ) );
    BitRow r;
    for ( auto const c : l.text )
      r.push_back( c == '1' );
    rows.push_back( std::move( r ) );
  }
  return BinaryMatrix::from_rows( rows );
}

inline std::string format_matrix( BinaryMatrix const& a ) { return a.to_string(); }

/*! \brief Hypergraph file: `t=<v>` then one edge per line as space-separated 1-based vertices. */
inline Hypergraph parse_hypergraph( std::string const& text, std::string const& source = "<input>" )
{
  auto const lines = detail::content_lines( text );
  if ( lines.empty() )
    detail::fail( source, 1, "missing 't=<vertices>' header" );
  auto const t = detail::parse_header( source, lines[0], 't', 0, Hypergraph::max_vertices );
  Hypergraph h( t );
  for ( std::size_t i = 1; i < lines.size(); ++i )
  {
    std::istringstream in( lines[i].text );
    std::vector<unsigned> edge;
    std::string token;
    while ( in >> token )
    {
      if ( token.find_first_not_of( "0123456789" ) != std::string::npos || token.size() > 3 )
        detail::fail( source, lines[i].number, "'" + token + "' is not a vertex index" );
      edge.push_back( static_cast<unsigned>( std::stoul( token ) ) );
    }
    try
    {
      h.add_edge( edge );
    }
    catch ( input_error const& e )
    {
      detail::fail( source, lines[i].number, e.what() );
    }
  }
  return h;
}

inline std::string format_hypergraph( Hypergraph const& h )
{
  std::string s = "t=" + std::to_string( h.num_vertices() ) + "\n";
  for ( auto const e : h.edges() )
  {
    bool first = true;
    for ( unsigned v = 0; v < h.num_vertices(); ++v )
      if ( ( e >> v ) & 1u )
      {
        s += ( first ? "" : " " ) + std::to_string( v + 1 );
        first = false;
      }
    s += '\n';
  }
  return s;
}

/*! \brief Quadratic file: `n=<k>`, then the n(n-1)/2 upper-triangular bits row-major
  ((1,2),(1,3),...,(n-1,n)), the n linear bits, and the constant bit, one line each.
  The pair line is empty for n = 1. */
inline QuadraticPolynomial parse_quadratic( std::string const& text, std::string const& source = "<input>" )
{
  std::vector<detail::Line> lines;
  {
    std::istringstream in( text );
    std::string line;
    std::size_t number = 0;
    while ( std::getline( in, line ) )
    {
      ++number;
      auto t = detail::trim( line );
      if ( !t.empty() && t[0] == '#' )
        continue;
      lines.push_back( { number, std::move( t ) } );
    }
    while ( !lines.empty() && lines.back().text.empty() )
      lines.pop_back();
  }
  if ( lines.empty() )
    detail::fail( source, 1, "missing 'n=<k>' header" );
  auto const n = detail::parse_header( source, lines[0], 'n', 1, BooleanFunction::max_vars );
  if ( lines.size() != 4 )
    detail::fail( source, lines.back().number, "expected 4 lines (header, pairs, linear, constant), got " +
                                                   std::to_string( lines.size() ) );
  auto check = [&]( detail::Line const& l, std::size_t len, char const* what ) {
    if ( l.text.size() != len || ( len > 0 && !detail::is_bit_string( l.text ) ) )
      detail::fail( source, l.number, std::string( what ) + " needs " + std::to_string( len ) + " bits" );
  };
  check( lines[1], n * ( n - 1 ) / 2, "quadratic part" );
  check( lines[2], n, "linear part" );
  check( lines[3], 1, "constant" );
  QuadraticPolynomial q( n );
  std::size_t k = 0;
  for ( unsigned i = 0; i < n; ++i )
    for ( unsigned j = i + 1; j < n; ++j, ++k )
      if ( lines[1].text[k] == '1' )
        q.add_term( i, j );
  for ( unsigned i = 0; i < n; ++i )
    if ( lines[2].text[i] == '1' )
      q.add_linear( i );
  if ( lines[3].text[0] == '1' )
    q.add_constant();
  return q;
}

inline std::string format_quadratic( QuadraticPolynomial const& q )
{
  auto const n = q.num_vars();
  std::string s = "n=" + std::to_string( n ) + "\n";
  for ( unsigned i = 0; i < n; ++i )
    for ( unsigned j = i + 1; j < n; ++j )
      s += q.quadratic( i, j ) ? '1' : '0';
  s += '\n';
  for ( unsigned i = 0; i < n; ++i )
    s += ( ( q.linear() >> i ) & 1u ) ? '1' : '0';
  s += '\n';
  s += q.constant() ? "1\n" : "0\n";
  return s;
}

/*! \brief Group spec `p^k1 x p^k2 x ...`, e.g. `2^2 x 2^1`; a bare `p` means `p^1`. */
inline FiniteAbelianPGroup parse_group( std::string const& spec )
{
  std::vector<std::string> factors;
  std::string cur;
  for ( auto const c : spec )
  {
    if ( c == 'x' || c == 'X' || c == '*' )
    {
      factors.push_back( detail::trim( cur ) );
      cur.clear();
    }
    else
      cur += c;
  }
  factors.push_back( detail::trim( cur ) );
  std::uint32_t p = 0;
  std::vector<unsigned> exps;
  for ( auto const& f : factors )
  {
    auto const caret = f.find( '^' );
    auto const base = detail::trim( f.substr( 0, caret ) );
    auto const exp = caret == std::string::npos ? std::string( "1" ) : detail::trim( f.substr( caret + 1 ) );
    auto numeric = []( std::string const& s ) {
      return !s.empty() && s.size() <= 6 && s.find_first_not_of( "0123456789" ) == std::string::npos;
    };
    if ( !numeric( base ) || !numeric( exp ) )
      throw input_error( "cannot parse group factor '" + f + "' in '" + spec + "' (expected p^k)" );
    auto const b = static_cast<std::uint32_t>( std::stoul( base ) );
    if ( p != 0 && b != p )
      throw input_error( "all factors of a p-group share one prime; got " + std::to_string( p ) + " and " +
                         std::to_string( b ) );
    p = b;
    exps.push_back( static_cast<unsigned>( std::stoul( exp ) ) );
  }
  return FiniteAbelianPGroup( p, exps );
}

/*! \brief Map file: one codomain tuple per line (space-separated coordinates), in domain index order. */
inline GroupMap parse_map( std::string const& text, FiniteAbelianPGroup const& domain,
                           FiniteAbelianPGroup const& codomain, std::string const& source = "<input>" )
{
  auto const lines = detail::content_lines( text );
  if ( lines.size() != domain.size() )
    detail::fail( source, lines.empty() ? 1 : lines.back().number,
                  "map needs " + std::to_string( domain.size() ) + " lines (one per element of G), got " +
                      std::to_string( lines.size() ) );
  std::vector<std::uint64_t> table;
  for ( auto const& l : lines )
  {
    std::istringstream in( l.text );
    std::vector<std::uint32_t> tuple;
    std::string token;
    while ( in >> token )
    {
      if ( token.find_first_not_of( "0123456789" ) != std::string::npos || token.size() > 6 )
        detail::fail( source, l.number, "'" + token + "' is not a coordinate" );
      tuple.push_back( static_cast<std::uint32_t>( std::stoul( token ) ) );
    }
    try
    {
      table.push_back( codomain.encode( tuple ) );
    }
    catch ( input_error const& e )
    {
      detail::fail( source, l.number, e.what() );
    }
  }
  return GroupMap( domain, codomain, std::move( table ) );
}

inline std::string format_tuple( std::vector<std::uint32_t> const& t )
{
  std::string s;
  for ( std::size_t i = 0; i < t.size(); ++i )
    s += ( i ? " " : "" ) + std::to_string( t[i] );
  return s;
}

inline std::string format_map( GroupMap const& m )
{
  std::string s;
  for ( std::uint64_t x = 0; x < m.domain().size(); ++x )
    s += format_tuple( m.codomain().decode( m( x ) ) ) + "\n";
  return s;
}

} // namespace lowdeg::io
