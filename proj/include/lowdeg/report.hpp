#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "genavg.hpp"
#include "gowers.hpp"
#include "rm2.hpp"
#include "testers.hpp"

namespace lowdeg::report
{

/*! \brief Flat key-value record; keys keep insertion order so output is stable. */
using Record = nlohmann::ordered_json;

inline Record to_record( TestReport const& r )
{
  Record j;
  j["test"] = r.test;
  j["trials"] = r.trials;
  j["accepts"] = r.accepts;
  j["acceptance"] = r.acceptance;
  j["stderr"] = r.std_error;
  j["seed"] = r.seed;
  j["theoretical_bound"] = r.theoretical_bound ? Record( *r.theoretical_bound ) : Record( nullptr );
  j["queries_per_trial"] = r.queries_per_trial;
  return j;
}

inline Record to_record( GowersEstimate const& e )
{
  Record j;
  j["d"] = e.d;
  j["value"] = e.value;
  j["raw_mean"] = e.raw_mean;
  j["stderr"] = e.std_error;
  j["stderr_available"] = e.std_error_available;
  j["trials"] = e.trials;
  j["seed"] = e.seed;
  return j;
}

inline Record to_record( AverageEstimate const& e )
{
  Record j;
  j["value"] = e.value;
  j["stderr"] = e.std_error;
  j["stderr_available"] = e.std_error_available;
  j["trials"] = e.trials;
  j["seed"] = e.seed;
  return j;
}

inline Record to_record( DichotomyVerdict const& v )
{
  Record j;
  j["branch"] = to_string( v.branch );
  j["nu"] = v.nu;
  j["delta"] = v.delta;
  j["confidence"] = v.confidence;
  j["trials"] = v.trials;
  j["seed"] = v.seed;
  j["far_bound"] = v.branch == DichotomyBranch::far ? Record( v.far_bound ) : Record( nullptr );
  j["near_statement"] = v.near_statement;
  return j;
}

inline std::string format_number( double x )
{
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.12g", x );
  return buf;
}

/*! \brief `key: value` lines for people, or one JSON object per line with `json`. */
inline std::string render( Record const& r, bool json )
{
  if ( json )
    return r.dump() + "\n";
  std::string out;
  for ( auto const& [key, value] : r.items() )
  {
    out += key + ": ";
    if ( value.is_number_float() )
      out += format_number( value.get<double>() );
    else if ( value.is_string() )
      out += value.get<std::string>();
    else if ( value.is_null() )
      out += "-";
    else
      out += value.dump();
    out += '\n';
  }
  return out;
}

} // namespace lowdeg::report
