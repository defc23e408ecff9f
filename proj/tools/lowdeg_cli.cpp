/*! \file lowdeg_cli.cpp
  \brief Command-line front end.

  Every subcommand prints one record, as `key: value` lines or, with
  --json, as a single JSON object. --out additionally writes a run record
  (command, seed, input digests, result, wall time).
*/

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <lowdeg/io.hpp>
#include <lowdeg/lowdeg.hpp>
#include <lowdeg/report.hpp>

using namespace lowdeg;
using report::Record;

namespace
{

constexpr char const* fn_format =
    "Function file (--fn):\n"
    "  line 1: n=<k>, 1 <= k <= 24\n"
    "  then either 2^k characters from {0,1}, possibly split over several lines;\n"
    "    character i is f at the point whose index is i, x1 being the least\n"
    "    significant bit, and '1' means f = -1\n"
    "  or one line holding a polynomial of degree <= 2 over x1..xk, e.g. x1*x2 + x3 + 1\n"
    "  blank lines and lines starting with '#' are ignored\n";

constexpr char const* matrix_format =
    "Matrix file (--matrix):\n"
    "  t lines (t <= 31), each a string of T characters from {0,1}, no separators;\n"
    "  column j lists the coefficients of y_1..y_t in the j-th argument of f\n";

constexpr char const* hypergraph_format =
    "Hypergraph file (--hg):\n"
    "  line 1: t=<vertices>, t <= 31\n"
    "  every further line: one edge as space-separated vertex indices in 1..t\n";

constexpr char const* quadratic_format =
    "Quadratic file:\n"
    "  line 1: n=<k>\n"
    "  line 2: the k(k-1)/2 coefficients of x_i x_j, i < j, in the order\n"
    "          (1,2),(1,3),...,(1,k),(2,3),...,(k-1,k); empty when k = 1\n"
    "  line 3: the k linear coefficients of x1..xk\n"
    "  line 4: the constant bit\n";

constexpr char const* group_format =
    "Groups (--domain, --codomain): p^k1 x p^k2 x ..., e.g. '2^2 x 2^1'; the\n"
    "  codomain must have every exponent equal to 1. Elements are tuples whose\n"
    "  last coordinate varies fastest in enumeration order.\n"
    "Map file (--map, --psi): |G| lines, line i holding the image of the i-th\n"
    "  element of G as space-separated coordinates.\n";

/*! \brief State shared by all subcommands. */
struct Session
{
  std::string command;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10000;
  bool json = false;
  unsigned threads = 0;
  std::string out;
  std::vector<std::pair<std::string, std::string>> inputs;

  std::string load( std::string const& path )
  {
    auto text = io::read_file( path );
    char buf[24];
    std::snprintf( buf, sizeof buf, "%016llx", static_cast<unsigned long long>( io::fnv1a( text ) ) );
    inputs.emplace_back( path, buf );
    return text;
  }

  BooleanFunction function( std::string const& path ) { return io::parse_function( load( path ), path ); }
};

std::string bits_of( std::uint64_t v, unsigned n )
{
  std::string s;
  for ( unsigned i = 0; i < n; ++i )
    s += ( ( v >> i ) & 1u ) ? '1' : '0';
  return s;
}

void emit( Session const& s, Record const& result, std::chrono::steady_clock::time_point start )
{
  std::cout << report::render( result, s.json );
  if ( s.out.empty() )
    return;
  Record run;
  run["command"] = s.command;
  run["seed"] = s.seed;
  Record inputs = Record::object();
  for ( auto const& [path, digest] : s.inputs )
    inputs[path] = digest;
  run["inputs"] = inputs;
  run["result"] = result;
  run["wall_time"] = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  io::write_file( s.out, run.dump( 2 ) + "\n" );
}

void with_bound( TestReport& r, bool enabled, auto&& bound )
{
  if ( enabled )
    r.theoretical_bound = bound();
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Low-degree testing toolkit: Gowers norms, linearity and quadraticity tests,\n"
                "Reed-Muller distance, quadratic decoding and homomorphism testing." };
  app.require_subcommand( 1 );
  app.footer( std::string( "\n" ) + fn_format + "\nExit codes: 0 success, 1 other failure, 2 input error, 3 resource limit.\n" );

  Session s;
  auto common = [&]( CLI::App* sub, bool randomized ) {
    sub->add_flag( "--json", s.json, "Print the result as one JSON object" );
    sub->add_option( "--threads", s.threads, "Cap on worker threads (results do not depend on it)" );
    sub->add_option( "--out", s.out, "Also write a run record (JSON) to this path" );
    if ( randomized )
    {
      sub->add_option( "--seed", s.seed, "Random seed" )->capture_default_str();
      sub->add_option( "--trials", s.trials, "Number of trials" )->capture_default_str()->check( CLI::PositiveNumber );
    }
  };

  std::string fn_path, matrix_path, hg_path;
  std::function<Record()> action;

  // spectrum -------------------------------------------------------------------
  auto* spectrum = app.add_subcommand( "spectrum", "Fourier coefficients sorted by magnitude, largest first" );
  std::size_t top = 0;
  spectrum->add_option( "--fn", fn_path, "Function file" )->required();
  spectrum->add_option( "--top", top, "Print only the largest K coefficients (0 = all)" );
  spectrum->footer( fn_format );
  common( spectrum, false );
  spectrum->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      auto const w = wht( f );
      std::vector<std::uint64_t> order( w.coeffs.size() );
      std::iota( order.begin(), order.end(), 0 );
      std::stable_sort( order.begin(), order.end(),
                        [&]( auto a, auto b ) { return std::abs( w[a] ) > std::abs( w[b] ); } );
      if ( top > 0 && top < order.size() )
        order.resize( top );
      Record r;
      r["n"] = f.num_vars();
      for ( auto const a : order )
        r[bits_of( a, f.num_vars() )] = w[a];
      return r;
    };
  } );

  // gowers ---------------------------------------------------------------------
  auto* gowers = app.add_subcommand( "gowers", "Gowers uniformity norm ||f||_{U_d}" );
  unsigned d = 2;
  bool estimate = false;
  gowers->add_option( "--fn", fn_path, "Function file" )->required();
  gowers->add_option( "--d", d, "Order d >= 1" )->capture_default_str();
  auto* exact_flag = gowers->add_flag( "--exact", "Exact evaluation (default)" );
  gowers->add_flag( "--estimate", estimate, "Monte-Carlo estimate" )->excludes( exact_flag );
  gowers->footer( fn_format );
  common( gowers, true );
  gowers->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      if ( estimate )
        return report::to_record( gowers_norm_estimate( f, d, s.trials, s.seed ) );
      Record r;
      r["d"] = d;
      auto const p = gowers_power_exact( f, d );
      r["value"] = std::pow( std::max( 0.0, p ), 1.0 / std::ldexp( 1.0, static_cast<int>( d ) ) );
      r["power"] = p;
      return r;
    };
  } );

  // average --------------------------------------------------------------------
  auto* average = app.add_subcommand( "average", "Generalized average E_A(f) of a matrix A" );
  average->add_option( "--matrix", matrix_path, "Matrix file" )->required();
  average->add_option( "--fn", fn_path, "Function file" )->required();
  average->add_flag( "--estimate", estimate, "Monte-Carlo estimate instead of exact counting" );
  average->footer( std::string( matrix_format ) + fn_format );
  common( average, true );
  average->callback( [&] {
    action = [&] {
      auto const a = io::parse_matrix( s.load( matrix_path ), matrix_path );
      auto const f = s.function( fn_path );
      if ( estimate )
        return report::to_record( generalized_average_estimate( a, f, s.trials, s.seed ) );
      Record r;
      r["rows"] = a.rows();
      r["cols"] = a.cols();
      r["value"] = generalized_average_exact( a, f );
      return r;
    };
  } );

  // reduce ---------------------------------------------------------------------
  auto* reduce = app.add_subcommand( "reduce", "Certificate that |E_A(f)| is bounded by a Gowers norm" );
  reduce->add_option( "--matrix", matrix_path, "Matrix file (distinct non-zero columns)" )->required();
  reduce->add_option( "--fn", fn_path, "Optional function file: evaluate both sides of the bound" );
  reduce->footer( std::string( matrix_format ) + fn_format );
  common( reduce, false );
  reduce->callback( [&] {
    action = [&] {
      auto const a = io::parse_matrix( s.load( matrix_path ), matrix_path );
      auto const cert = reduce_to_uk( a );
      Record r;
      r["rows"] = a.rows();
      r["cols"] = a.cols();
      r["steps"] = cert.steps.size();
      for ( std::size_t i = 0; i < cert.steps.size(); ++i )
      {
        std::string v;
        for ( auto b : cert.steps[i].minimal_vector )
          v += b ? '1' : '0';
        r["step" + std::to_string( i + 1 ) + "_vector"] = v;
        r["step" + std::to_string( i + 1 ) + "_shape"] = std::to_string( cert.steps[i].output.rows() ) + "x" +
                                                          std::to_string( cert.steps[i].output.cols() );
      }
      r["terminal_k"] = cert.terminal_k;
      r["exponent"] = cert.exponent;
      r["verified"] = verify_certificate( cert );
      if ( !fn_path.empty() )
      {
        auto const f = s.function( fn_path );
        r["average"] = generalized_average_exact( a, f );
        r["bound"] = cert.bound( f );
        r["norm"] = gowers_norm_exact( f, cert.terminal_k );
      }
      return r;
    };
  } );

  // test -----------------------------------------------------------------------
  auto* test = app.add_subcommand( "test", "Run a randomized test" );
  test->require_subcommand( 1 );
  bool bound = false, affine = false, exact = false;
  unsigned k = 3;
  auto test_common = [&]( CLI::App* sub, bool needs_hg ) {
    sub->add_option( "--fn", fn_path, "Function file" )->required();
    if ( needs_hg )
      sub->add_option( "--hg", hg_path, "Hypergraph file" )->required();
    sub->add_flag( "--with-bound", bound, "Fill theoretical_bound (computes an exact norm)" );
    sub->add_flag( "--exact", exact, "Add the exact acceptance probability" );
    sub->footer( std::string( fn_format ) + ( needs_hg ? hypergraph_format : "" ) );
    common( sub, true );
  };

  auto* blr = test->add_subcommand( "blr", "f(x)f(y)f(x+y) = 1 (or = f(0) with --affine)" );
  blr->add_flag( "--affine", affine, "Compare with f(0) instead of 1" );
  test_common( blr, false );
  blr->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      auto r = blr_test( f, s.trials, s.seed, affine );
      Hypergraph edge( 2 );
      edge.add_edge( { 1, 2 } );
      with_bound( r, bound, [&] { return linearity_soundness_bound( f, edge ); } );
      auto rec = report::to_record( r );
      if ( exact )
        rec["exact_acceptance"] = blr_exact_acceptance( f, affine );
      return rec;
    };
  } );

  auto linear_test = [&]( bool graph_only ) {
    return [&, graph_only] {
      action = [&, graph_only] {
        auto const f = s.function( fn_path );
        auto const h = io::parse_hypergraph( s.load( hg_path ), hg_path );
        if ( graph_only && !h.is_uniform( 2 ) )
          throw input_error( hg_path + ": the graph test needs every edge to have exactly 2 vertices" );
        auto r = hypergraph_linearity_test( f, h, s.trials, s.seed );
        with_bound( r, bound, [&] { return linearity_soundness_bound( f, h ); } );
        auto rec = report::to_record( r );
        if ( exact )
          rec["exact_acceptance"] = exact_acceptance_hypergraph( f, h );
        return rec;
      };
    };
  };
  auto* graph = test->add_subcommand( "graph", "Graph test: one BLR check per edge on shared points" );
  test_common( graph, true );
  graph->callback( linear_test( true ) );
  auto* hlin = test->add_subcommand( "hypergraph-lin", "Hypergraph linearity test" );
  test_common( hlin, true );
  hlin->callback( linear_test( false ) );

  auto* hquad = test->add_subcommand( "hypergraph-quad", "Quadraticity test on a 3-uniform hypergraph" );
  test_common( hquad, true );
  hquad->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      auto const h = io::parse_hypergraph( s.load( hg_path ), hg_path );
      auto r = hypergraph_quadraticity_test( f, h, s.trials, s.seed );
      with_bound( r, bound, [&] { return quadraticity_soundness_bound( f, h ); } );
      auto rec = report::to_record( r );
      if ( exact )
        rec["exact_acceptance"] = exact_acceptance_quadraticity( f, h );
      return rec;
    };
  } );

  auto* akklr = test->add_subcommand( "akklr", "Order-k derivative test: accept iff f_{y1..yk}(x) = 1" );
  akklr->add_option( "--k", k, "Derivative order" )->capture_default_str();
  test_common( akklr, false );
  akklr->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      auto r = akklr_test( f, k, s.trials, s.seed );
      with_bound( r, bound, [&] { return akklr_exact_acceptance( f, k ); } );
      auto rec = report::to_record( r );
      if ( exact )
        rec["exact_acceptance"] = akklr_exact_acceptance( f, k );
      return rec;
    };
  } );

  // rm2 ------------------------------------------------------------------------
  auto* rm2 = app.add_subcommand( "rm2", "Distance to quadratic polynomials" );
  rm2->require_subcommand( 1 );
  auto* distance = rm2->add_subcommand( "distance", "Exact distance by exhaustive search (n <= 6)" );
  std::string write_path;
  distance->add_option( "--fn", fn_path, "Function file" )->required();
  distance->add_option( "--write", write_path, "Write the nearest quadratic to this path" );
  distance->footer( std::string( fn_format ) + quadratic_format );
  common( distance, false );
  distance->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      auto const r = rm2_exact_distance( f );
      if ( !write_path.empty() )
        io::write_file( write_path, io::format_quadratic( r.nearest ) );
      Record rec;
      rec["distance"] = r.distance;
      rec["nearest"] = r.nearest.to_string();
      return rec;
    };
  } );

  auto* dicho = rm2->add_subcommand( "dicho", "Decide FAR from / NEAR to quadratics by sampling third derivatives" );
  double delta = 0.05, confidence = 0.95;
  dicho->add_option( "--fn", fn_path, "Function file" )->required();
  dicho->add_option( "--delta", delta, "Threshold on ||f||_{U_3}^8" )->capture_default_str();
  dicho->add_option( "--confidence", confidence, "Confidence level" )->capture_default_str();
  dicho->add_option( "--seed", s.seed, "Random seed" )->capture_default_str();
  dicho->add_flag( "--json", s.json, "Print the result as one JSON object" );
  dicho->add_option( "--threads", s.threads, "Cap on worker threads (results do not depend on it)" );
  dicho->add_option( "--out", s.out, "Also write a run record (JSON) to this path" );
  dicho->footer( fn_format );
  dicho->callback( [&] {
    action = [&] { return report::to_record( dichotomy( s.function( fn_path ), delta, confidence, s.seed ) ); };
  } );

  // decode ---------------------------------------------------------------------
  auto* decode = app.add_subcommand( "decode", "Find a quadratic correlating with f" );
  DecoderConfig dc;
  double threshold = -1;
  decode->add_option( "--fn", fn_path, "Function file" )->required();
  decode->add_option( "--threshold", threshold, "Weight cutoff for the linear fit (default: half the mean weight)" );
  decode->add_option( "--restarts", dc.restarts, "Restarts of the linear fit" )->capture_default_str();
  decode->add_option( "--seed", s.seed, "Random seed" )->capture_default_str();
  decode->add_flag( "--oracle", dc.oracle, "Exhaustive linear fit (n <= 3)" );
  decode->add_flag( "--shift-search", dc.shift_search, "Also fit an affine shift" );
  decode->add_option( "--write", write_path, "Write the quadratic to this path" );
  decode->add_flag( "--json", s.json, "Print the result as one JSON object" );
  decode->add_option( "--threads", s.threads, "Cap on worker threads (results do not depend on it)" );
  decode->add_option( "--out", s.out, "Also write a run record (JSON) to this path" );
  decode->footer( std::string( fn_format ) + quadratic_format );
  decode->callback( [&] {
    action = [&] {
      auto const f = s.function( fn_path );
      dc.seed = s.seed;
      if ( threshold >= 0 )
        dc.threshold = threshold;
      auto const r = decode_quadratic( f, dc );
      if ( !write_path.empty() )
        io::write_file( write_path, io::format_quadratic( r.q ) );
      Record rec;
      rec["correlation"] = r.correlation;
      rec["distance"] = ( 1.0 - r.correlation ) / 2.0;
      rec["quadratic"] = r.q.to_string();
      rec["affine_fallback"] = r.affine_fallback;
      rec["fit_agreement"] = r.fit.agreement;
      rec["fit_support"] = r.fit.support;
      rec["threshold"] = r.fit.threshold;
      rec["seed"] = s.seed;
      return rec;
    };
  } );

  // hom ------------------------------------------------------------------------
  auto* hom = app.add_subcommand( "hom", "Homomorphism testing over finite abelian p-groups" );
  hom->require_subcommand( 1 );
  std::string domain_spec, codomain_spec, map_path, psi_path, shift_tuple;
  bool sampled = false;
  auto hom_common = [&]( CLI::App* sub, bool randomized ) {
    sub->add_option( "--domain", domain_spec, "Domain group G" )->required();
    sub->add_option( "--codomain", codomain_spec, "Codomain group H (a power of Z_p)" )->required();
    sub->add_option( "--map", map_path, "Map file for phi" )->required();
    sub->footer( group_format );
    common( sub, randomized );
  };
  auto load_map = [&]( std::string const& path ) {
    auto const g = io::parse_group( domain_spec );
    auto const h = io::parse_group( codomain_spec );
    return io::parse_map( s.load( path ), g, h, path );
  };

  auto* agree = hom->add_subcommand( "agree", "Pr_{x,y}[phi(x) + phi(y) = phi(x+y)]" );
  agree->add_flag( "--sample", sampled, "Sample pairs instead of enumerating them" );
  hom_common( agree, true );
  agree->callback( [&] {
    action = [&] {
      auto const phi = load_map( map_path );
      if ( sampled )
        return report::to_record( blr_agreement_sampled( phi, s.trials, s.seed ) );
      Record r;
      r["agreement"] = blr_agreement( phi );
      r["homomorphism"] = is_homomorphism( phi );
      return r;
    };
  } );

  auto* best = hom->add_subcommand( "best", "Homomorphism agreeing with phi most often" );
  hom_common( best, false );
  best->callback( [&] {
    action = [&] {
      auto const phi = load_map( map_path );
      auto const b = best_homomorphism( phi );
      Record r;
      r["agreement"] = b.agreement;
      for ( unsigned i = 0; i < phi.domain().rank(); ++i )
        r["image_e" + std::to_string( i + 1 )] = io::format_tuple( phi.codomain().decode( b.psi( phi.domain().unit( i ) ) ) );
      return r;
    };
  } );

  auto* correct = hom->add_subcommand( "correct", "Shift correction: from phi ~ psi + h to a homomorphism" );
  correct->add_option( "--psi", psi_path, "Map file for the homomorphism psi" )->required();
  correct->add_option( "--shift", shift_tuple, "h as space-separated coordinates, e.g. '1 0'" )->required();
  correct->add_option( "--write", write_path, "Write psi' as a map file to this path" );
  hom_common( correct, false );
  correct->callback( [&] {
    action = [&] {
      auto const phi = load_map( map_path );
      auto const psi = load_map( psi_path );
      std::istringstream in( shift_tuple );
      std::vector<std::uint32_t> t;
      std::string token;
      while ( in >> token )
      {
        if ( token.find_first_not_of( "0123456789" ) != std::string::npos || token.size() > 6 )
          throw input_error( "--shift: '" + token + "' is not a coordinate" );
        t.push_back( static_cast<std::uint32_t>( std::stoul( token ) ) );
      }
      auto const sc = shift_correction( phi, psi, phi.codomain().encode( t ) );
      if ( !write_path.empty() )
        io::write_file( write_path, io::format_map( sc.psi_prime ) );
      Record r;
      r["coordinate"] = sc.coordinate + 1;
      r["generator"] = sc.generator;
      r["e_size"] = sc.e_size;
      r["e_prime_size"] = sc.e_prime_size;
      r["agreement"] = sc.agreement;
      r["homomorphism"] = is_homomorphism( sc.psi_prime );
      for ( unsigned i = 0; i < phi.domain().rank(); ++i )
        r["image_e" + std::to_string( i + 1 )] =
            io::format_tuple( phi.codomain().decode( sc.psi_prime( phi.domain().unit( i ) ) ) );
      return r;
    };
  } );

  // gen ------------------------------------------------------------------------
  auto* gen = app.add_subcommand( "gen", "Write a function file to standard output (or --write)" );
  gen->require_subcommand( 1 );
  unsigned n = 8;
  std::string a_bits;
  bool b_bit = false;
  double rate = 0.1;
  std::optional<BooleanFunction> generated;
  auto gen_common = [&]( CLI::App* sub, bool needs_n ) {
    if ( needs_n )
      sub->add_option( "--n", n, "Number of variables" )->capture_default_str();
    sub->add_option( "--write", write_path, "Write to this path instead of standard output" );
    sub->footer( fn_format );
  };
  auto* glin = gen->add_subcommand( "linear", "(-1)^{<a,x> + b}" );
  glin->add_option( "--a", a_bits, "a as n characters from {0,1}, x1 first (default all zero)" );
  glin->add_flag( "--b", b_bit, "Constant bit b = 1" );
  gen_common( glin, true );
  glin->callback( [&] {
    std::uint64_t a = 0;
    if ( a_bits.size() > n || a_bits.find_first_not_of( "01" ) != std::string::npos )
      throw input_error( "--a must be at most n characters from {0,1}" );
    for ( std::size_t i = 0; i < a_bits.size(); ++i )
      a |= static_cast<std::uint64_t>( a_bits[i] == '1' ) << i;
    generated = linear_fn( n, a, b_bit );
  } );
  auto* gbent = gen->add_subcommand( "bent", "x1 x2 + x3 x4 + ... (n even)" );
  gen_common( gbent, true );
  gbent->callback( [&] { generated = inner_product_bent( n ); } );
  auto* gquad = gen->add_subcommand( "quadratic", "Random quadratic polynomial" );
  gquad->add_option( "--seed", s.seed, "Random seed" )->capture_default_str();
  gquad->add_option( "--poly", psi_path, "Also write the polynomial as a quadratic file" );
  gen_common( gquad, true );
  gquad->footer( std::string( fn_format ) + quadratic_format );
  gquad->callback( [&] {
    auto const q = random_quadratic( n, s.seed );
    if ( !psi_path.empty() )
      io::write_file( psi_path, io::format_quadratic( q ) );
    generated = from_quadratic( q );
  } );
  auto* grand = gen->add_subcommand( "random", "Uniformly random function" );
  grand->add_option( "--seed", s.seed, "Random seed" )->capture_default_str();
  gen_common( grand, true );
  grand->callback( [&] { generated = random_fn( n, s.seed ); } );
  auto* gnoisy = gen->add_subcommand( "noisy", "Flip each value of --fn independently with probability --rate" );
  gnoisy->add_option( "--fn", fn_path, "Function file" )->required();
  gnoisy->add_option( "--rate", rate, "Flip probability in [0, 1]" )->capture_default_str();
  gnoisy->add_option( "--seed", s.seed, "Random seed" )->capture_default_str();
  gen_common( gnoisy, false );
  gnoisy->callback( [&] { generated = noisy( s.function( fn_path ), rate, s.seed ); } );

  try
  {
    s.command = "lowdeg";
    for ( int i = 1; i < argc; ++i )
      s.command += std::string( " " ) + argv[i];
    try
    {
      app.parse( argc, argv );
    }
    catch ( CLI::ParseError const& e )
    {
      auto const code = app.exit( e );
      return code == 0 ? 0 : 2;
    }
    set_max_threads( s.threads ? s.threads : std::max( 1u, std::thread::hardware_concurrency() ) );
    if ( generated )
    {
      auto const text = io::format_function( *generated );
      if ( write_path.empty() )
        std::cout << text;
      else
        io::write_file( write_path, text );
      return 0;
    }
    auto const start = std::chrono::steady_clock::now();
    emit( s, action(), start );
    return 0;
  }
  catch ( input_error const& e )
  {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  catch ( resource_error const& e )
  {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
