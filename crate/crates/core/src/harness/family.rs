use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lattice::{FiniteSequence, IntegerInterval};

/// Shape of the generated sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `δ_j`.
    Delta,
    /// Indicator of a block.
    Indicator,
    /// `1, 2, …, L` or its reverse on a block.
    Ramp,
    /// Independent uniform values on a block.
    Random,
    /// Sorted strictly positive uniform values on a block, non-constant.
    Monotone,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Delta => "delta",
            Generator::Indicator => "indicator",
            Generator::Ramp => "ramp",
            Generator::Random => "random",
            Generator::Monotone => "monotone",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Generator::Delta => 1,
            Generator::Indicator => 2,
            Generator::Ramp => 3,
            Generator::Random => 4,
            Generator::Monotone => 5,
        }
    }
}

/// Deterministic stream of test sequences: case `i` depends only on
/// `(generator, seed, sizes, i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputFamily {
    pub generator: Generator,
    pub seed: u64,
    /// Longest block.
    pub max_len: usize,
    /// Block starts are drawn from `[-spread, spread]`.
    pub spread: i64,
    /// Values are drawn from `[0, max_value]`.
    pub max_value: f64,
}

/// A ChaCha stream for `(seed, tag, index)`.
pub fn case_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

impl InputFamily {
    pub fn new(generator: Generator, seed: u64) -> Self {
        Self {
            generator,
            seed,
            max_len: 32,
            spread: 64,
            max_value: 8.0,
        }
    }

    pub fn with_sizes(mut self, max_len: usize, spread: i64, max_value: f64) -> Self {
        self.max_len = max_len.max(2);
        self.spread = spread;
        self.max_value = max_value;
        self
    }

    pub fn name(&self) -> &'static str {
        self.generator.name()
    }

    /// Extra randomness for case `index`, independent of the sequence.
    pub fn aux_rng(&self, index: u64) -> ChaCha8Rng {
        case_rng(self.seed, 0x100 + self.generator.tag(), index)
    }

    pub fn case(&self, index: u64) -> FiniteSequence {
        let mut rng = case_rng(self.seed, self.generator.tag(), index);
        let start = rng.random_range(-self.spread..=self.spread);
        let len = |rng: &mut ChaCha8Rng, min: usize| rng.random_range(min..=self.max_len);
        match self.generator {
            Generator::Delta => FiniteSequence::delta(start),
            Generator::Indicator => {
                let n = len(&mut rng, 1) as i64;
                FiniteSequence::indicator(IntegerInterval::new(start, start + n - 1).unwrap())
            }
            Generator::Ramp => {
                let n = len(&mut rng, 2);
                let mut v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
                if rng.random_bool(0.5) {
                    v.reverse();
                }
                FiniteSequence::new(start, v).unwrap()
            }
            Generator::Random => {
                let n = len(&mut rng, 1);
                let v = (0..n)
                    .map(|_| rng.random_range(0.0..=self.max_value))
                    .collect();
                FiniteSequence::new(start, v).unwrap()
            }
            Generator::Monotone => {
                let n = len(&mut rng, 2);
                let lo = 1e-3 * self.max_value;
                let mut v: Vec<f64> = (0..n)
                    .map(|_| rng.random_range(lo..=self.max_value))
                    .collect();
                v.sort_by(f64::total_cmp);
                if v[0] == v[n - 1] {
                    v[n - 1] += lo;
                }
                if rng.random_bool(0.5) {
                    v.reverse();
                }
                FiniteSequence::new(start, v).unwrap()
            }
        }
    }
}
