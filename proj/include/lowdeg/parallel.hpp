#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lowdeg
{

namespace detail
{
inline std::atomic<unsigned>& thread_cap()
{
  static std::atomic<unsigned> cap{ std::max( 1u, std::thread::hardware_concurrency() ) };
  return cap;
}
} // namespace detail

/*! \brief Upper bound on worker threads used by internal loops.

  Only affects speed: work is always split into the same fixed blocks and
  partial results are combined in block order.
*/
inline unsigned max_threads() { return detail::thread_cap().load(); }
inline void set_max_threads( unsigned n ) { detail::thread_cap().store( std::max( 1u, n ) ); }

/*! \brief Number of blocks a range of `count` items is cut into. Independent of thread count. */
inline std::uint64_t block_count( std::uint64_t count )
{
  constexpr std::uint64_t max_blocks = 256;
  return std::max<std::uint64_t>( 1, std::min( count, max_blocks ) );
}

/*! \brief Runs `body(begin, end, block)` over fixed blocks of [0, count). */
template<class Body>
void parallel_blocks( std::uint64_t count, Body&& body )
{
  auto const blocks = block_count( count );
  auto const range = [&]( std::uint64_t b ) {
    return std::pair{ count * b / blocks, count * ( b + 1 ) / blocks };
  };

  auto const workers = static_cast<std::uint64_t>( std::min<std::uint64_t>( max_threads(), blocks ) );
  if ( workers <= 1 )
  {
    for ( std::uint64_t b = 0; b < blocks; ++b )
    {
      auto [lo, hi] = range( b );
      body( lo, hi, b );
    }
    return;
  }

  std::atomic<std::uint64_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for ( ;; )
    {
      auto const b = next.fetch_add( 1 );
      if ( b >= blocks )
        return;
      try
      {
        auto [lo, hi] = range( b );
        body( lo, hi, b );
      }
      catch ( ... )
      {
        std::lock_guard lock( failure_mutex );
        if ( !failure )
          failure = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve( workers - 1 );
  for ( std::uint64_t w = 1; w < workers; ++w )
    pool.emplace_back( worker );
  worker();
  for ( auto& t : pool )
    t.join();
  if ( failure )
    std::rethrow_exception( failure );
}

/*! \brief Block-wise map then in-order fold; deterministic for any thread count. */
template<class T, class BlockFn, class Combine>
T parallel_reduce( std::uint64_t count, T init, BlockFn&& block_fn, Combine&& combine )
{
  std::vector<T> partial( block_count( count ), init );
  parallel_blocks( count, [&]( std::uint64_t lo, std::uint64_t hi, std::uint64_t b ) {
    partial[b] = block_fn( lo, hi );
  } );
  T acc = init;
  for ( auto const& p : partial )
    acc = combine( acc, p );
  return acc;
}

} // namespace lowdeg
