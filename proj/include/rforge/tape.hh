#pragma once

#include <rforge/partition.hh>
#include <rforge/rules.hh>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rforge {

using RoundIndex = std::uint32_t;

/// A finite sequence of colours.
using SymbolSeq = std::vector<Colour>;

class TapeError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Thrown when a finite tape is asked for a round index it does not have.
class TapeExhausted : public TapeError {
  public:
    TapeExhausted(PartIndex part, RoundIndex t);
    PartIndex part;
    RoundIndex round;
};

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t tape_gamma = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t tape_salt = 0xD1B54A32D192ED03ULL;

/// The reference cell function: rejection-sampled mix64 of (seed, part, t) reduced mod b.
/// Pure; part and t must fit in 32 bits.
Colour tape_symbol(std::uint64_t seed, std::uint64_t part, std::uint64_t t, Colour b);

/// Source of the symbols rnd(part, t).
class SymbolSource {
  public:
    virtual ~SymbolSource() = default;
    virtual Colour symbol(PartIndex part, RoundIndex t) = 0;
    virtual Colour colours() const = 0;
};

/// Lazily evaluated infinite tape rnd ∈ b^{π×ℕ}. Cells are pure functions of
/// (seed, part, t, b); the object only adds per-part access highwater marks, so give
/// each thread its own instance and merge with merge_highwater().
class RandomTape final : public SymbolSource {
  public:
    RandomTape(std::uint64_t seed, Colour b, std::size_t num_parts = 0);

    Colour symbol(PartIndex part, RoundIndex t) override;
    Colour colours() const override { return b_; }
    std::uint64_t seed() const { return seed_; }

    /// Same value as symbol() without touching the highwater marks.
    Colour peek(PartIndex part, RoundIndex t) const;

    /// 1 + highest round index read per part (0 if never read).
    const std::vector<RoundIndex> &highwater() const { return highwater_; }
    void merge_highwater(const RandomTape &other);

  private:
    std::uint64_t seed_;
    Colour b_;
    std::vector<RoundIndex> highwater_;
};

/// Explicit table rnd_m ∈ b^{π×m}; reading round ≥ m throws TapeExhausted.
class FiniteTape final : public SymbolSource {
  public:
    FiniteTape(Colour b, std::size_t num_parts, std::size_t rounds);
    FiniteTape(Colour b, std::size_t num_parts, std::size_t rounds,
               std::vector<Colour> symbols);

    /// Tape number `index` in the enumeration order where cell (part, t) is digit
    /// t·|π| + part of index in base b (digit 0 least significant).
    static FiniteTape from_index(Colour b, std::size_t num_parts, std::size_t rounds,
                                 std::uint64_t index);

    Colour symbol(PartIndex part, RoundIndex t) override;
    Colour colours() const override { return b_; }

    std::size_t rounds() const { return rounds_; }
    std::size_t num_parts() const { return num_parts_; }
    void set(PartIndex part, RoundIndex t, Colour value);

  private:
    Colour b_;
    std::size_t num_parts_;
    std::size_t rounds_;
    std::vector<Colour> cells_; // index t * num_parts + part
};

} // namespace rforge
