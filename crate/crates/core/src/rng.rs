//! Portable pseudo-random generator for instance generation.
//!
//! The recurrence is fixed so that any implementation reproduces the same
//! instances:
//!
//! ```text
//! seeding (splitmix64, applied once to the user seed s):
//!     z = s + 0x9E3779B97F4A7C15
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!     state = z ^ (z >> 31)            (replaced by 1 if zero)
//! step (xorshift64*):
//!     x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
//!     output = x * 0x2545F4914F6CDD1D
//! uniform in [0, 1):
//!     (output >> 11) * 2^-53
//! ```
//!
//! All arithmetic is wrapping on unsigned 64-bit integers.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn seed(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        let state = z ^ (z >> 31);
        XorShift64Star { state: if state == 0 { 1 } else { state } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
