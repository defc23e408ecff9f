#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace
{

struct Run
{
  int code;
  std::string out;
};

Run run( std::string const& args )
{
  std::string const cmd = std::string( "cd " ) + LOWDEG_SAMPLES_DIR + " && " + LOWDEG_CLI_PATH + " " + args + " 2>/dev/null";
  auto* pipe = popen( cmd.c_str(), "r" );
  REQUIRE( pipe != nullptr );
  std::string out;
  char buf[4096];
  while ( auto const n = fread( buf, 1, sizeof buf, pipe ) )
    out.append( buf, n );
  auto const status = pclose( pipe );
  return { WIFEXITED( status ) ? WEXITSTATUS( status ) : -1, out };
}

std::string field( std::string const& out, std::string const& key )
{
  auto const pos = out.find( key + ": " );
  if ( pos == std::string::npos )
    return {};
  auto const start = pos + key.size() + 2;
  return out.substr( start, out.find( '\n', start ) - start );
}

} // namespace

TEST_CASE( "outputs are byte-identical across runs and thread counts", "[cli]" )
{
  for ( std::string const cmd : { "test blr --fn bent8.tt --exact --with-bound",
                                  "test graph --fn noisy10.tt --hg k4.hg --json",
                                  "test hypergraph-quad --fn quad10.tt --hg k4_3.hg",
                                  "test akklr --fn random6.tt --k 3 --seed 9",
                                  "gowers --fn random6.tt --d 3 --estimate --trials 5000",
                                  "average --matrix fano.mat --fn random6.tt --estimate",
                                  "rm2 dicho --fn noisy10.tt",
                                  "decode --fn noisy10.tt --seed 4",
                                  "hom agree --domain 2^2 --codomain 2 --map z4_corrupted.map --sample",
                                  "spectrum --fn quad6.tt" } )
  {
    auto const a = run( cmd + " --threads 1" );
    auto const b = run( cmd + " --threads 8" );
    auto const c = run( cmd );
    INFO( cmd );
    REQUIRE( a.code == 0 );
    CHECK( !a.out.empty() );
    CHECK( a.out == b.out );
    CHECK( a.out == c.out );
  }
}

TEST_CASE( "known values", "[cli]" )
{
  CHECK( field( run( "hom agree --domain 2^2 --codomain 2 --map z4_corrupted.map" ).out, "agreement" ) == "0.625" );
  CHECK( field( run( "gowers --fn bent8.tt --d 3" ).out, "value" ) == "1" );
  CHECK( field( run( "rm2 distance --fn quad6.tt" ).out, "distance" ) == "0" );
  CHECK( field( run( "test hypergraph-quad --fn quad10.tt --hg k4_3.hg" ).out, "acceptance" ) == "1" );
  auto const reduce = run( "reduce --matrix fano.mat --fn random6.tt" );
  CHECK( field( reduce.out, "verified" ) == "true" );
  CHECK( field( reduce.out, "terminal_k" ) == "3" );

  auto const j = nlohmann::json::parse( run( "test blr --fn quad6.tt --json" ).out );
  CHECK( j["test"] == "blr" );
  CHECK( j.contains( "stderr" ) );
  CHECK( j["theoretical_bound"].is_null() );
}

TEST_CASE( "generated files parse back", "[cli]" )
{
  auto const dir = std::filesystem::temp_directory_path() / "lowdeg_cli_test";
  std::filesystem::create_directories( dir );
  auto const path = ( dir / "q.tt" ).string();
  auto const poly = ( dir / "q.quad" ).string();
  REQUIRE( run( "gen quadratic --n 6 --seed 2 --write " + path + " --poly " + poly ).code == 0 );
  CHECK( field( run( "rm2 distance --fn " + path ).out, "distance" ) == "0" );
  auto const out = ( dir / "run.json" ).string();
  REQUIRE( run( "decode --fn " + path + " --out " + out ).code == 0 );
  std::ifstream in( out );
  auto const record = nlohmann::json::parse( in );
  CHECK( record["result"]["correlation"] == 1.0 );
  auto const digest = record["inputs"][path].get<std::string>();
  CHECK( digest.size() == 16 );
  CHECK( record.contains( "wall_time" ) );
  std::filesystem::remove_all( dir );
}

TEST_CASE( "exit codes", "[cli]" )
{
  CHECK( run( "gowers --fn missing.tt --d 2" ).code == 2 );
  CHECK( run( "gowers --fn random6.tt --d x" ).code == 2 );
  CHECK( run( "no-such-command" ).code == 2 );
  CHECK( run( "test graph --fn bent8.tt --hg k4_3.hg" ).code == 2 );
  CHECK( run( "rm2 distance --fn noisy10.tt" ).code == 3 );
  CHECK( run( "decode --fn random6.tt --oracle" ).code == 3 );
  CHECK( run( "hom correct --domain 2^2 --codomain 2 --map z4_corrupted.map --psi z4_mod2.map --shift 1" ).code == 0 );
  CHECK( run( "--help" ).code == 0 );
}

TEST_CASE( "help documents the file formats", "[cli]" )
{
  auto const top = run( "--help" ).out;
  CHECK( top.find( "Exit codes" ) != std::string::npos );
  CHECK( run( "test hypergraph-lin --help" ).out.find( "t=<vertices>" ) != std::string::npos );
  CHECK( run( "average --help" ).out.find( "Matrix file" ) != std::string::npos );
  CHECK( run( "decode --help" ).out.find( "Quadratic file" ) != std::string::npos );
  CHECK( run( "hom best --help" ).out.find( "Map file" ) != std::string::npos );
  CHECK( run( "spectrum --help" ).out.find( "n=<k>" ) != std::string::npos );
}
