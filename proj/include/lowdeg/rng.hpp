#pragma once

#include <cstdint>
#include <limits>

namespace lowdeg
{

/*! \brief SplitMix64 output function. */
constexpr std::uint64_t splitmix_finalize( std::uint64_t z ) noexcept
{
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ULL;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebULL;
  return z ^ ( z >> 31 );
}

/*! \brief Counter-based random stream keyed by (seed, stream id).

  Every randomized procedure in the library derives one stream per
  independent unit of work (a trial, a table word, a restart), so results
  do not depend on how work is scheduled across threads. The generator is
  SplitMix64 started from a state derived from both keys.

  Satisfies UniformRandomBitGenerator, but library code only uses the
  explicit helpers below: standard distributions are not bit-stable
  across standard library implementations.
*/
class RandomStream
{
public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

  constexpr RandomStream( std::uint64_t seed, std::uint64_t stream ) noexcept
      : state_( splitmix_finalize( seed ^ splitmix_finalize( stream + 0x6a09e667f3bcc909ULL ) ) )
  {
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept
  {
    state_ += golden;
    return splitmix_finalize( state_ );
  }

  /*! \brief Uniform integer with `count` random low bits (count <= 64). */
  constexpr std::uint64_t bits( unsigned count ) noexcept
  {
    auto const r = ( *this )();
    return count >= 64 ? r : ( r & ( ( std::uint64_t{ 1 } << count ) - 1 ) );
  }

  /*! \brief Uniform double in [0, 1) with 53 random bits. */
  constexpr double uniform() noexcept
  {
    return static_cast<double>( ( *this )() >> 11 ) * 0x1.0p-53;
  }

  /*! \brief Uniform integer in [0, bound), bound > 0, by rejection. */
  constexpr std::uint64_t below( std::uint64_t bound ) noexcept
  {
    auto const threshold = ( 0 - bound ) % bound;
    for ( ;; )
    {
      auto const r = ( *this )();
      if ( r >= threshold )
        return r % bound;
    }
  }

private:
  std::uint64_t state_;
};

} // namespace lowdeg
