//! Sampling sequences on `[0, 1)` for the random-choice step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceKind {
    /// Base-2 van der Corput sequence, starting after `start` terms.
    VanDerCorput { start: u64 },
    /// ChaCha8 stream seeded with `seed`.
    SeededPrng { seed: u64 },
}

impl Default for SequenceKind {
    fn default() -> Self {
        SequenceKind::VanDerCorput { start: 0 }
    }
}

/// Radical inverse of `n` in base 2.
pub fn van_der_corput(n: u64) -> f64 {
    n.reverse_bits() as f64 / 18446744073709551616.0
}

pub enum Sampler {
    VanDerCorput { next: u64 },
    Prng(Box<ChaCha8Rng>),
}

impl Sampler {
    pub fn new(kind: SequenceKind) -> Self {
        match kind {
            SequenceKind::VanDerCorput { start } => Sampler::VanDerCorput { next: start + 1 },
            SequenceKind::SeededPrng { seed } => {
                Sampler::Prng(Box::new(ChaCha8Rng::seed_from_u64(seed)))
            }
        }
    }

    pub fn next_sample(&mut self) -> f64 {
        match self {
            Sampler::VanDerCorput { next } => {
                let v = van_der_corput(*next);
                *next += 1;
                v
            }
            Sampler::Prng(rng) => rng.gen::<f64>(),
        }
    }
}
