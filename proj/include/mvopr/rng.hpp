#pragma once

#include <cstdint>

namespace mvopr {

/** xoshiro256** pseudo-random generator with splitmix64 seeding; used for
 *  all node sampling so that seeded draws are reproducible independently
 *  of the standard library implementation. */
class Xoshiro256
{
public:
	explicit Xoshiro256(std::uint64_t seed = 0) { this->seed(seed); }

	void seed(std::uint64_t s)
	{
		// splitmix64 expansion of the seed
		for (auto &word : s_) {
			s += 0x9e3779b97f4a7c15ULL;
			std::uint64_t z = s;
			z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
			z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
			word = z ^ (z >> 31);
		}
	}

	std::uint64_t next()
	{
		const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
		const std::uint64_t t = s_[1] << 17;
		s_[2] ^= s_[0];
		s_[3] ^= s_[1];
		s_[1] ^= s_[2];
		s_[0] ^= s_[3];
		s_[2] ^= t;
		s_[3] = rotl(s_[3], 45);
		return result;
	}

	/** Uniform double in [0, 1). */
	double uniform() { return (next() >> 11) * 0x1.0p-53; }

	/** Uniform double in [lo, hi). */
	double uniform(double lo, double hi)
	{
		return lo + (hi - lo) * uniform();
	}

private:
	static std::uint64_t rotl(std::uint64_t x, int k)
	{
		return (x << k) | (x >> (64 - k));
	}
	std::uint64_t s_[4];
};

} // namespace mvopr
