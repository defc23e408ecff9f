#include <catch_amalgamated.hpp>

#include <lowdeg/parallel.hpp>
#include <lowdeg/testers.hpp>

#include "oracles.hpp"

using namespace lowdeg;
using Catch::Approx;

namespace
{

BooleanFunction cubic_monomial()
{
  std::vector<int> bits( 8 );
  bits[7] = 1;
  return from_truth_table( 3, bits );
}

BooleanFunction random_affine( unsigned n, std::uint64_t seed )
{
  RandomStream rng( seed, 0 );
  auto const a = rng.bits( n );
  return linear_fn( n, a, rng.bits( 1 ) );
}

} // namespace

TEST_CASE( "hypergraph construction", "[testers]" )
{
  Hypergraph h( 4 );
  h.add_edge( { 1, 2 } ).add_edge( { 2, 1 } ).add_edge( { 1, 3, 4 } );
  CHECK( h.num_edges() == 2 );
  CHECK( h.max_edge_size() == 3 );
  CHECK( !h.is_uniform( 2 ) );
  CHECK_THROWS_AS( h.add_edge( { 5 } ), input_error );
  CHECK_THROWS_AS( h.add_edge( { 1, 1 } ), input_error );
  CHECK_THROWS_AS( h.add_edge( {} ), input_error );
  CHECK( Hypergraph::complete( 4, 2 ).num_edges() == 6 );
  CHECK( Hypergraph::complete( 5, 3 ).num_edges() == 10 );
}

TEST_CASE( "BLR examples", "[testers]" )
{
  auto const lin = linear_fn( 10, 0x2f1 );
  auto const r = blr_test( lin, 10000, 1 );
  CHECK( r.acceptance == 1.0 );
  CHECK( r.accepts == 10000 );
  CHECK( r.queries_per_trial == 3 );

  auto const minus = -BooleanFunction( 6 );
  CHECK( blr_test( minus, 1000, 2, true ).acceptance == 1.0 );
  CHECK( blr_test( minus, 1000, 2, false ).acceptance == 0.0 );

  CHECK( blr_exact_acceptance( inner_product_bent( 4 ) ) == 0.53125 );
  CHECK_THROWS_AS( blr_test( lin, 0, 1 ), input_error );
}

TEST_CASE( "BLR exact acceptance matches the single-edge expansion", "[testers]" )
{
  Hypergraph h( 2 );
  h.add_edge( { 1, 2 } );
  for ( std::uint64_t s = 0; s < 20; ++s )
  {
    auto const f = random_fn( 4, s );
    CHECK( blr_exact_acceptance( f, true ) == Approx( exact_acceptance_hypergraph( f, h ) ).margin( 1e-12 ) );
    CHECK( exact_acceptance_hypergraph( f, h ) == Approx( oracle::hypergraph_acceptance( f, h, false ) ).margin( 1e-12 ) );
  }
}

TEST_CASE( "perfect completeness", "[testers]" )
{
  auto const graph = Hypergraph::complete( 4, 2 );
  auto const mixed = Hypergraph( 5 ).add_edge( { 1, 2, 3 } ).add_edge( { 4 } ).add_edge( { 2, 4, 5 } ).add_edge( { 1, 5 } );
  auto const triples = Hypergraph::complete( 4, 3 );
  for ( std::uint64_t s = 0; s < 5; ++s )
  {
    auto const aff = random_affine( 10, s );
    CHECK( hypergraph_linearity_test( aff, graph, 10000, s ).accepts == 10000 );
    CHECK( hypergraph_linearity_test( aff, mixed, 10000, s ).accepts == 10000 );
    auto const q = from_quadratic( random_quadratic( 10, s ) );
    CHECK( hypergraph_quadraticity_test( q, triples, 10000, s ).accepts == 10000 );
    CHECK( akklr_test( q, 3, 10000, s ).accepts == 10000 );
    CHECK( akklr_test( aff, 2, 10000, s ).accepts == 10000 );

    CHECK( exact_acceptance_hypergraph( random_affine( 3, s ), graph ) == Approx( 1.0 ).margin( 1e-12 ) );
    CHECK( exact_acceptance_quadraticity( from_quadratic( random_quadratic( 3, s ) ), triples ) ==
           Approx( 1.0 ).margin( 1e-12 ) );
  }
  CHECK( akklr_test( -BooleanFunction( 5 ), 1, 1000, 3 ).acceptance == 1.0 );
}

TEST_CASE( "bent function against the 3-uniform linearity test", "[testers]" )
{
  // each size-3 edge accepts with probability (1 + sum f^4) / 2, so the bent
  // function is accepted well above 1/2^|E| although it is far from affine
  auto const h = Hypergraph::complete( 4, 3 );
  auto const small = inner_product_bent( 4 );
  auto const exact = exact_acceptance_hypergraph( small, h );
  CHECK( exact == Approx( oracle::hypergraph_acceptance( small, h, false ) ).margin( 1e-12 ) );
  CHECK( exact > 1.0 / 16 );

  auto const bent = inner_product_bent( 8 );
  auto const r = hypergraph_linearity_test( bent, h, 10000, 5 );
  CHECK( r.acceptance > 1.0 / 16 + 4 * r.std_error );
  CHECK( wht( bent ).max_abs() == 1.0 / 16 );

  Hypergraph one( 3 );
  one.add_edge( { 1, 2, 3 } );
  CHECK( exact_acceptance_hypergraph( small, one ) == Approx( ( 1.0 + 1.0 / 16 ) / 2 ).margin( 1e-12 ) );
}

TEST_CASE( "empty hypergraph and singleton edges are vacuous", "[testers]" )
{
  auto const f = random_fn( 6, 9 );
  Hypergraph empty( 3 );
  CHECK( exact_acceptance_hypergraph( f, empty ) == 1.0 );
  CHECK( hypergraph_linearity_test( f, empty, 100, 1 ).acceptance == 1.0 );
  Hypergraph single( 2 );
  single.add_edge( { 2 } );
  CHECK( hypergraph_linearity_test( f, single, 500, 1 ).acceptance == 1.0 );
  CHECK( linearity_soundness_bound( f, single ) == 1.0 );
}

TEST_CASE( "queries per trial", "[testers]" )
{
  auto const f = random_fn( 5, 1 );
  auto const g = Hypergraph::complete( 4, 2 );
  CHECK( hypergraph_linearity_test( f, g, 10, 1 ).queries_per_trial == 4 + 6 );
  CHECK( hypergraph_linearity_test( f, g, 10, 1 ).test == "graph" );
  CHECK( akklr_test( f, 3, 10, 1 ).queries_per_trial == 8 );
  // one triple: 3 points plus 4 sums
  Hypergraph one( 3 );
  one.add_edge( { 1, 2, 3 } );
  CHECK( hypergraph_quadraticity_test( f, one, 10, 1 ).queries_per_trial == 7 );
}

TEST_CASE( "quadraticity needs a 3-uniform hypergraph", "[testers]" )
{
  CHECK_THROWS_AS( hypergraph_quadraticity_test( random_fn( 4, 1 ), Hypergraph::complete( 3, 2 ), 10, 1 ), input_error );
}

TEST_CASE( "cubic monomial with a single triple", "[testers]" )
{
  auto const f = cubic_monomial();
  Hypergraph one( 3 );
  one.add_edge( { 1, 2, 3 } );
  auto const expected = ( 1.0 + gowers_power_exact( f, 3 ) ) / 2.0;
  CHECK( exact_acceptance_quadraticity( f, one ) == Approx( expected ).margin( 1e-12 ) );
  CHECK( oracle::hypergraph_acceptance( f, one, true ) == Approx( expected ).margin( 1e-12 ) );
}

TEST_CASE( "exact acceptance agrees with enumeration and Monte Carlo", "[testers]" )
{
  for ( std::uint64_t s = 0; s < 20; ++s )
  {
    RandomStream rng( s, 7 );
    auto const n = 2 + static_cast<unsigned>( rng.below( 3 ) );
    auto const t = 2 + static_cast<unsigned>( rng.below( 2 ) );
    Hypergraph h( t );
    auto const edges = 1 + rng.below( 3 );
    for ( std::uint64_t e = 0; e < edges; ++e )
      h.add_edge_mask( static_cast<std::uint32_t>( 1 + rng.below( ( 1u << t ) - 1 ) ) );
    auto const f = random_fn( n, s );
    auto const exact = exact_acceptance_hypergraph( f, h );
    REQUIRE( exact == Approx( oracle::hypergraph_acceptance( f, h, false ) ).margin( 1e-12 ) );
    auto const mc = hypergraph_linearity_test( f, h, 20000, s );
    CHECK( std::abs( mc.acceptance - exact ) <= 4 * mc.std_error + 1e-12 );
  }
  for ( std::uint64_t s = 0; s < 10; ++s )
  {
    auto const f = random_fn( 2, s );
    auto const h = Hypergraph::complete( 4, 3 );
    CHECK( exact_acceptance_quadraticity( f, h ) == Approx( oracle::hypergraph_acceptance( f, h, true ) ).margin( 1e-12 ) );
  }
}

TEST_CASE( "soundness bounds hold", "[testers]" )
{
  auto const graph = Hypergraph::complete( 4, 2 );
  Hypergraph quad( 5 );
  quad.add_edge( { 1, 2, 3 } ).add_edge( { 2, 3, 4 } ).add_edge( { 3, 4, 5 } ).add_edge( { 1, 4, 5 } );
  for ( std::uint64_t s = 0; s < 5; ++s )
  {
    auto const f = random_fn( 8, 40 + s );
    auto r = hypergraph_linearity_test( f, graph, 20000, s );
    CHECK( r.acceptance <= linearity_soundness_bound( f, graph ) + 4 * r.std_error );
    r = hypergraph_quadraticity_test( f, quad, 20000, s );
    CHECK( r.acceptance <= quadraticity_soundness_bound( f, quad ) + 4 * r.std_error );
  }
}

TEST_CASE( "akklr matches its exact acceptance", "[testers]" )
{
  for ( std::uint64_t s = 0; s < 4; ++s )
  {
    auto const f = random_fn( 6, 60 + s );
    for ( unsigned k : { 2u, 3u } )
    {
      auto const r = akklr_test( f, k, 50000, s );
      CHECK( std::abs( r.acceptance - akklr_exact_acceptance( f, k ) ) <= 4 * r.std_error );
    }
  }
  CHECK_THROWS_AS( akklr_test( random_fn( 3, 1 ), 0, 10, 1 ), input_error );
}

TEST_CASE( "reports are deterministic across thread counts", "[testers]" )
{
  auto const f = random_fn( 9, 3 );
  auto const h = Hypergraph::complete( 4, 2 );
  set_max_threads( 1 );
  auto const a = hypergraph_linearity_test( f, h, 30000, 17 );
  set_max_threads( 8 );
  auto const b = hypergraph_linearity_test( f, h, 30000, 17 );
  CHECK( a.accepts == b.accepts );
  CHECK( a.std_error == b.std_error );
  CHECK( hypergraph_linearity_test( f, h, 30000, 18 ).accepts != a.accepts );
}
