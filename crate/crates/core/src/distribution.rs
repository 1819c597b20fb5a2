//! Outcome spaces, validated probability distributions, belief ratios and
//! deterministic sampling.
//!
//! Everything is finite and discrete: integrals over outcomes become sums
//! over the entries of a [`Distribution`].

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on the total mass of weights ingested without normalization.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A finite set of labelled outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeSpace {
    labels: Vec<String>,
}

impl OutcomeSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::TooFewOutcomes(labels.len()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Arc::new(OutcomeSpace { labels }))
    }

    /// Space labelled `"0"`, `"1"`, ... `"n-1"`.
    pub fn indexed(n: usize) -> Result<Arc<Self>> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

pub(crate) fn ensure_same_space(a: &Arc<OutcomeSpace>, b: &Arc<OutcomeSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Normalized probability mass over an [`OutcomeSpace`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    #[serde(skip)]
    space: Arc<OutcomeSpace>,
    mass: Vec<f64>,
}

impl Distribution {
    /// Validates `weights` on `space`.
    ///
    /// With `normalize` set, any nonnegative weights with a positive total are
    /// accepted and rescaled. Otherwise the total must already be within
    /// [`NORMALIZATION_TOLERANCE`] of 1; the stored mass is renormalized either
    /// way.
    pub fn new(space: Arc<OutcomeSpace>, weights: &[f64], normalize: bool) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: weights.len() });
        }
        for (index, &value) in weights.iter().enumerate() {
            if value.is_nan() || value.is_infinite() {
                return Err(Error::NonFiniteMass { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeMass { index, value });
            }
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return Err(Error::ZeroTotal);
        }
        if !normalize && (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum: total, tolerance: NORMALIZATION_TOLERANCE });
        }
        let mass = weights.iter().map(|w| w / total).collect();
        Ok(Distribution { space, mass })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Uniform mass on `space`.
    pub fn uniform(space: Arc<OutcomeSpace>) -> Self {
        let n = space.len();
        Distribution { space, mass: vec![1.0 / n as f64; n] }
    }

    /// First outcome with zero mass, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.mass.iter().position(|&m| m == 0.0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.first_zero().is_none()
    }

    /// Replaces exact zeros with `floor` and renormalizes. Strictly positive
    /// distributions are returned unchanged.
    pub fn floored(&self, floor: f64) -> Distribution {
        if self.is_strictly_positive() {
            return self.clone();
        }
        let raised: Vec<f64> =
            self.mass.iter().map(|&m| if m == 0.0 { floor } else { m }).collect();
        let total: f64 = raised.iter().sum();
        Distribution { space: Arc::clone(&self.space), mass: raised.iter().map(|m| m / total).collect() }
    }

    /// Draws an outcome index with probability equal to its mass.
    pub fn sample(&self, rng: &mut RngState) -> usize {
        let u: f64 = rng.rng.random();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &m) in self.mass.iter().enumerate() {
            if m > 0.0 {
                acc += m;
                last_positive = i;
                if u < acc {
                    return i;
                }
            }
        }
        // Rounding can leave the cumulative sum a hair below 1.
        last_positive
    }
}

/// Builds a distribution on an index-labelled space.
pub fn make_distribution(weights: &[f64], normalize: bool) -> Result<Distribution> {
    let space = OutcomeSpace::indexed(weights.len())?;
    Distribution::new(space, weights, normalize)
}

/// Pointwise ratio `f = b / m` of a belief to a market.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioFunction {
    #[serde(skip)]
    space: Arc<OutcomeSpace>,
    values: Vec<f64>,
}

impl RatioFunction {
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn belief_ratio(b: &Distribution, m: &Distribution) -> Result<RatioFunction> {
    ensure_same_space(&b.space, &m.space)?;
    if let Some(index) = m.first_zero() {
        return Err(Error::ZeroMarketMass { index });
    }
    let values = b.mass.iter().zip(&m.mass).map(|(bx, mx)| bx / mx).collect();
    Ok(RatioFunction { space: Arc::clone(&b.space), values })
}

/// Seeded random stream.
///
/// Stream `i` of master seed `s` is `ChaCha8Rng::seed_from_u64(s)` moved to
/// ChaCha stream `i`, so streams never overlap and do not depend on how many
/// other streams exist.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngState { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

/// Free-function form of [`Distribution::sample`].
pub fn sample_outcome(dist: &Distribution, rng: &mut RngState) -> usize {
    dist.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_normalized_weights() {
        let d = make_distribution(&[0.5, 0.5], false).unwrap();
        assert_eq!(d.mass(), &[0.5, 0.5]);
    }

    #[test]
    fn normalizes_on_request() {
        let d = make_distribution(&[2.0, 2.0], true).unwrap();
        assert_eq!(d.mass(), &[0.5, 0.5]);
    }

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(
            make_distribution(&[1.0, -1.0], true),
            Err(Error::NegativeMass { index: 1, value: -1.0 })
        );
        assert_eq!(make_distribution(&[0.0, 0.0], true), Err(Error::ZeroTotal));
        assert!(matches!(make_distribution(&[0.5, 0.6], false), Err(Error::NotNormalized { .. })));
        assert!(matches!(make_distribution(&[1.0], true), Err(Error::TooFewOutcomes(1))));
        assert!(matches!(make_distribution(&[], true), Err(Error::TooFewOutcomes(0))));
        assert!(matches!(make_distribution(&[f64::NAN, 1.0], true), Err(Error::NonFiniteMass { .. })));
    }

    #[test]
    fn tolerates_small_normalization_error() {
        let d = make_distribution(&[0.5 + 4e-10, 0.5], false).unwrap();
        assert!((d.mass().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(OutcomeSpace::new(["a", "a"]), Err(Error::DuplicateLabel("a".into())));
    }

    #[test]
    fn ratio_examples() {
        let b = make_distribution(&[0.6, 0.4], false).unwrap();
        let m = make_distribution(&[0.5, 0.5], false).unwrap();
        assert_eq!(belief_ratio(&b, &m).unwrap().values(), &[1.2, 0.8]);
        assert_eq!(belief_ratio(&b, &b).unwrap().values(), &[1.0, 1.0]);
        let degenerate = make_distribution(&[1.0, 0.0], false).unwrap();
        assert_eq!(belief_ratio(&b, &degenerate), Err(Error::ZeroMarketMass { index: 1 }));
    }

    #[test]
    fn ratio_space_mismatch() {
        let b = make_distribution(&[0.6, 0.4], false).unwrap();
        let other = Distribution::new(OutcomeSpace::new(["up", "down"]).unwrap(), &[0.5, 0.5], false)
            .unwrap();
        assert_eq!(belief_ratio(&b, &other), Err(Error::SpaceMismatch));
        let three = make_distribution(&[0.2, 0.3, 0.5], false).unwrap();
        assert_eq!(belief_ratio(&b, &three), Err(Error::SpaceMismatch));
    }

    #[test]
    fn degenerate_distribution_always_samples_its_atom() {
        let d = make_distribution(&[1.0, 0.0], false).unwrap();
        for seed in 0..20 {
            let mut rng = RngState::new(seed, 3);
            for _ in 0..100 {
                assert_eq!(sample_outcome(&d, &mut rng), 0);
            }
        }
        let d = make_distribution(&[0.0, 1.0, 0.0], false).unwrap();
        let mut rng = RngState::new(1, 0);
        assert!((0..1000).all(|_| d.sample(&mut rng) == 1));
    }

    #[test]
    fn sampling_is_reproducible() {
        let d = make_distribution(&[0.2, 0.3, 0.5], false).unwrap();
        let draw = |seed, stream| {
            let mut rng = RngState::new(seed, stream);
            (0..256).map(|_| d.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(42, 7), draw(42, 7));
        assert_ne!(draw(42, 7), draw(42, 8));
        assert_ne!(draw(42, 7), draw(43, 7));
    }

    #[test]
    fn empirical_frequency_matches_mass() {
        let d = make_distribution(&[0.5, 0.5], false).unwrap();
        let mut rng = RngState::new(2024, 0);
        let n = 100_000;
        let zeros = (0..n).filter(|_| d.sample(&mut rng) == 0).count();
        assert!((zeros as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn floor_replaces_zeros_only() {
        let d = make_distribution(&[1.0, 0.0], false).unwrap();
        let f = d.floored(1e-12);
        assert!(f.is_strictly_positive());
        assert!((f.mass()[1] - 1e-12).abs() < 1e-23);
        let p = make_distribution(&[0.6, 0.4], false).unwrap();
        assert_eq!(p.floored(1e-12), p);
    }
}
