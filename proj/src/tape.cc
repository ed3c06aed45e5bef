#include <rforge/tape.hh>

#include <algorithm>
#include <limits>
#include <string>

namespace rforge {

TapeExhausted::TapeExhausted(PartIndex part, RoundIndex t) :
    TapeError("finite tape has no cell (" + std::to_string(part) + "," + std::to_string(t) + ")"),
    part(part),
    round(t)
{
}

Colour tape_symbol(std::uint64_t seed, std::uint64_t part, std::uint64_t t, Colour b)
{
    constexpr std::uint64_t limit32 = std::uint64_t{1} << 32;
    if (part >= limit32 || t >= limit32)
        throw TapeError("tape index (" + std::to_string(part) + "," + std::to_string(t) +
                        ") exceeds 32 bits");
    if (b == 0)
        throw TapeError("tape colour count must be positive");

    // accept v < floor(2^64/b)*b; when b divides 2^64 every value is accepted
    const std::uint64_t wrap = (std::numeric_limits<std::uint64_t>::max() % b + 1) % b;
    const std::uint64_t accept_below = 0 - wrap;

    const std::uint64_t base = seed + ((part << 32) + t + 1) * tape_gamma;
    for (std::uint64_t j = 0;; ++j) {
        std::uint64_t v = mix64(base + j * tape_salt);
        if (wrap == 0 || v < accept_below)
            return static_cast<Colour>(v % b);
    }
}

RandomTape::RandomTape(std::uint64_t seed, Colour b, std::size_t num_parts) :
    seed_(seed), b_(b), highwater_(num_parts, 0)
{
}

Colour RandomTape::peek(PartIndex part, RoundIndex t) const { return tape_symbol(seed_, part, t, b_); }

Colour RandomTape::symbol(PartIndex part, RoundIndex t)
{
    auto value = peek(part, t);
    if (part >= highwater_.size())
        highwater_.resize(part + 1, 0);
    highwater_[part] = std::max(highwater_[part], t + 1);
    return value;
}

void RandomTape::merge_highwater(const RandomTape &other)
{
    if (other.highwater_.size() > highwater_.size())
        highwater_.resize(other.highwater_.size(), 0);
    for (std::size_t i = 0; i < other.highwater_.size(); ++i)
        highwater_[i] = std::max(highwater_[i], other.highwater_[i]);
}

FiniteTape::FiniteTape(Colour b, std::size_t num_parts, std::size_t rounds) :
    b_(b), num_parts_(num_parts), rounds_(rounds), cells_(num_parts * rounds, 0)
{
}

FiniteTape::FiniteTape(Colour b, std::size_t num_parts, std::size_t rounds,
                       std::vector<Colour> symbols) :
    b_(b), num_parts_(num_parts), rounds_(rounds), cells_(std::move(symbols))
{
    if (cells_.size() != num_parts * rounds)
        throw TapeError("finite tape needs " + std::to_string(num_parts * rounds) + " cells");
    for (Colour c : cells_)
        if (c >= b_)
            throw TapeError("finite tape symbol out of range");
}

FiniteTape FiniteTape::from_index(Colour b, std::size_t num_parts, std::size_t rounds,
                                  std::uint64_t index)
{
    FiniteTape tape(b, num_parts, rounds);
    for (auto &cell : tape.cells_) {
        cell = static_cast<Colour>(index % b);
        index /= b;
    }
    return tape;
}

Colour FiniteTape::symbol(PartIndex part, RoundIndex t)
{
    if (t >= rounds_ || part >= num_parts_)
        throw TapeExhausted(part, t);
    return cells_[t * num_parts_ + part];
}

void FiniteTape::set(PartIndex part, RoundIndex t, Colour value)
{
    if (t >= rounds_ || part >= num_parts_)
        throw TapeExhausted(part, t);
    cells_[t * num_parts_ + part] = value;
}

} // namespace rforge
