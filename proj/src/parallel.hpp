#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace openarc::detail {

// Splits [0, count) into contiguous blocks over the available hardware threads;
// body(begin, end) must only write data owned by its block.
template <class Body>
void parallel_blocks(int count, int min_block, const Body& body)
{
    const int workers = std::clamp<int>(static_cast<int>(std::thread::hardware_concurrency()), 1,
                                        std::max(1, count / std::max(1, min_block)));
    if (workers == 1) {
        body(0, count);
        return;
    }
    std::vector<std::jthread> pool;
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(count, begin + chunk);
        if (begin < end) {
            pool.emplace_back([&body, begin, end] { body(begin, end); });
        }
    }
}

}  // namespace openarc::detail
