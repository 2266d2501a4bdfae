//! Synthetic sample sources for the sweeps and reward observation noise.
//!
//! Three sources on the support `[0, 5]`: a truncated Gaussian centred at
//! 2.5, a truncated unit-rate exponential, and a piecewise-constant "custom"
//! density with a tall narrow spike, a near-empty valley and a fat tail.
//! Samplers are deterministic per `(spec, seed)`; downstream code only ever
//! compares the emitted values.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};

/// Sampling support shared by all three sources.
pub const SUPPORT: (f64, f64) = (0.0, 5.0);

/// Piecewise-constant density segments of the custom source:
/// `(lo, hi, height)`, zero outside. Unnormalized mass is 0.525.
pub const CUSTOM_STEP_SEGMENTS: [(f64, f64, f64); 6] = [
    (0.0, 0.25, 0.3),
    (0.25, 1.25, 0.0),
    (1.25, 2.5, 0.02),
    (2.5, 2.75, 0.5),
    (2.75, 3.0, 0.2),
    (3.0, 5.0, 0.125),
];

/// Shape of a sample source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceKind {
    /// Gaussian rejected onto the support.
    Gaussian { mean: f64, std_dev: f64 },
    /// Exponential rejected onto the support.
    Exponential { rate: f64 },
    /// The fixed step density above.
    CustomStep,
}

impl SourceKind {
    pub fn gaussian_default() -> Self {
        SourceKind::Gaussian {
            mean: 2.5,
            std_dev: 1.0,
        }
    }

    pub fn exponential_default() -> Self {
        SourceKind::Exponential { rate: 1.0 }
    }
}

/// A source plus its seed: fully determines the emitted sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub seed: u64,
}

impl SourceSpec {
    pub fn new(kind: SourceKind, seed: u64) -> Self {
        SourceSpec { kind, seed }
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self)
    }
}

/// Stateful sampler; position `p` of the stream is the `p`-th call.
pub struct Sampler {
    kind: SourceKind,
    rng: ChaCha8Rng,
    segment_cumulative: [f64; 6],
}

impl Sampler {
    fn new(spec: &SourceSpec) -> Self {
        let mut cumulative = [0.0; 6];
        let mut acc = 0.0;
        for (i, (lo, hi, height)) in CUSTOM_STEP_SEGMENTS.iter().enumerate() {
            acc += (hi - lo) * height;
            cumulative[i] = acc;
        }
        Sampler {
            kind: spec.kind,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            segment_cumulative: cumulative,
        }
    }

    /// Total unnormalized mass of the custom step density.
    pub fn custom_step_mass() -> f64 {
        CUSTOM_STEP_SEGMENTS
            .iter()
            .map(|(lo, hi, h)| (hi - lo) * h)
            .sum()
    }

    pub fn next_value(&mut self) -> f64 {
        match self.kind {
            SourceKind::Gaussian { mean, std_dev } => {
                let normal = Normal::new(mean, std_dev).expect("finite parameters");
                loop {
                    let x = normal.sample(&mut self.rng);
                    if (SUPPORT.0..=SUPPORT.1).contains(&x) {
                        return x;
                    }
                }
            }
            SourceKind::Exponential { rate } => {
                let exp = Exp::new(rate).expect("positive rate");
                loop {
                    let x = exp.sample(&mut self.rng);
                    if x <= SUPPORT.1 {
                        return x;
                    }
                }
            }
            SourceKind::CustomStep => {
                let total = self.segment_cumulative[5];
                let r = self.rng.gen::<f64>() * total;
                let idx = self
                    .segment_cumulative
                    .iter()
                    .position(|c| r <= *c)
                    .unwrap_or(5);
                let (lo, hi, _) = CUSTOM_STEP_SEGMENTS[idx];
                lo + self.rng.gen::<f64>() * (hi - lo)
            }
        }
    }

    /// Draws the next `count` values.
    pub fn take_values(&mut self, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.next_value()).collect()
    }
}

/// Perturbs a true score with Gaussian observation noise. A zero sigma
/// returns the score bit-exactly and consumes no randomness.
pub fn add_noise<R: Rng>(true_score: f64, sigma: f64, rng: &mut R) -> f64 {
    debug_assert!(sigma >= 0.0);
    if sigma == 0.0 {
        return true_score;
    }
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    true_score + normal.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn custom_step_mass_is_0_525() {
        assert!((Sampler::custom_step_mass() - 0.525).abs() < 1e-12);
    }

    #[test]
    fn replay_is_deterministic() {
        for kind in [
            SourceKind::gaussian_default(),
            SourceKind::exponential_default(),
            SourceKind::CustomStep,
        ] {
            let spec = SourceSpec::new(kind, 99);
            let a = spec.sampler().take_values(10);
            let b = spec.sampler().take_values(10);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn samples_stay_in_support() {
        for kind in [
            SourceKind::gaussian_default(),
            SourceKind::exponential_default(),
            SourceKind::CustomStep,
        ] {
            let mut s = SourceSpec::new(kind, 3).sampler();
            for _ in 0..2000 {
                let x = s.next_value();
                assert!((SUPPORT.0..=SUPPORT.1).contains(&x), "{kind:?} emitted {x}");
            }
        }
    }

    #[test]
    fn custom_step_segment_frequencies() {
        let mut s = SourceSpec::new(SourceKind::CustomStep, 7).sampler();
        let n = 100_000;
        let mut hits = [0usize; 6];
        'outer: for _ in 0..n {
            let x = s.next_value();
            for (i, (lo, hi, _)) in CUSTOM_STEP_SEGMENTS.iter().enumerate() {
                if x >= *lo && x <= *hi {
                    hits[i] += 1;
                    continue 'outer;
                }
            }
            panic!("sample {x} outside all segments");
        }
        let mass = Sampler::custom_step_mass();
        for (i, (lo, hi, h)) in CUSTOM_STEP_SEGMENTS.iter().enumerate() {
            let expected = (hi - lo) * h / mass;
            let observed = hits[i] as f64 / n as f64;
            assert!(
                (observed - expected).abs() <= 0.01,
                "segment {i}: observed {observed:.4}, expected {expected:.4}"
            );
        }
    }

    #[test]
    fn truncated_gaussian_median_is_centre() {
        let mut s = SourceSpec::new(SourceKind::gaussian_default(), 21).sampler();
        let mut v = s.take_values(100_000);
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = v[v.len() / 2];
        assert!((median - 2.5).abs() <= 0.02, "median {median}");
    }

    #[test]
    fn zero_sigma_noise_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(add_noise(3.0, 0.0, &mut rng), 3.0);
        // No randomness consumed: the stream is unchanged.
        let before = rng.gen::<u64>();
        let mut rng2 = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(before, rng2.gen::<u64>());
    }

    #[test]
    fn positive_sigma_breaks_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = add_noise(3.0, 10.0, &mut rng);
        let b = add_noise(3.0, 10.0, &mut rng);
        assert_ne!(a, b);
    }

    #[test]
    fn noise_is_centred() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| add_noise(0.0, 1.0, &mut rng)).sum::<f64>() / n as f64;
        // CLT: standard error is 1/sqrt(n) ~ 0.0032; 0.02 is > 6 sigma.
        assert!(mean.abs() <= 0.02, "mean {mean}");
    }
}
