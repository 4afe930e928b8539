//! Gradually drifting hyperplane source.
//!
//! Each learner observes a 3-dimensional instance uniform on `[-1, 1]^3`.
//! The label is the sign of a weighted sum over the first `relevant`
//! learners' instances; the remaining learners observe irrelevant data. The
//! weights start standard normal and follow a Gaussian random walk, so the
//! separating hyperplane rotates slowly and the concept drifts every slot.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};
use crate::types::sign;

use super::{SlotSample, StreamSource};

pub struct RotatingHyperplaneSource {
    k: usize,
    relevant: usize,
    theta: Vec<[f64; 3]>,
    walk_std: f64,
    rng: ChaCha8Rng,
    concept: u64,
}

impl RotatingHyperplaneSource {
    pub fn new(k: usize, relevant: usize, walk_std: f64, seed: u64) -> Result<Self> {
        if k < 1 || relevant < 1 || relevant > k {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= relevant <= k, got relevant={relevant}, k={k}"
            )));
        }
        if walk_std < 0.0 || !walk_std.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "walk_std must be non-negative, got {walk_std}"
            )));
        }
        let mut rng = substream(seed, Stream::Source);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let theta = (0..relevant)
            .map(|_| {
                [
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                ]
            })
            .collect();
        Ok(RotatingHyperplaneSource {
            k,
            relevant,
            theta,
            walk_std,
            rng,
            concept: 0,
        })
    }

    pub fn theta(&self) -> &[[f64; 3]] {
        &self.theta
    }

    /// How many learners' observations actually determine the label.
    pub fn relevant_count(&self) -> usize {
        self.relevant
    }
}

impl StreamSource for RotatingHyperplaneSource {
    fn learner_count(&self) -> usize {
        self.k
    }

    fn feature_dimension(&self) -> usize {
        3
    }

    fn next_slot(&mut self) -> Result<SlotSample> {
        let unit = Uniform::new_inclusive(-1.0, 1.0);
        let features: Vec<Vec<f64>> = (0..self.k)
            .map(|_| (0..3).map(|_| unit.sample(&mut self.rng)).collect())
            .collect();
        let score: f64 = self
            .theta
            .iter()
            .zip(&features)
            .map(|(t, x)| t[0] * x[0] + t[1] * x[1] + t[2] * x[2])
            .sum();
        let label = sign(score)?;
        let concept = self.concept;
        if self.walk_std > 0.0 {
            let walk = Normal::new(0.0, self.walk_std).unwrap();
            for t in &mut self.theta {
                for v in t.iter_mut() {
                    *v += walk.sample(&mut self.rng);
                }
            }
            // the source distribution changed, so each slot is its own concept
            self.concept += 1;
        }
        Ok(SlotSample {
            features,
            label,
            concept,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::BinaryLabel;

    #[test]
    fn frozen_walk_gives_a_fixed_linear_threshold() {
        let mut a = RotatingHyperplaneSource::new(2, 1, 0.0, 11).unwrap();
        let theta = a.theta()[0];
        for _ in 0..200 {
            let slot = a.next_slot().unwrap();
            let score: f64 = theta
                .iter()
                .zip(&slot.features[0])
                .map(|(t, x)| t * x)
                .sum();
            assert_eq!(slot.label, sign(score).unwrap());
            assert_eq!(slot.concept, 0);
        }
    }

    #[test]
    fn positive_weighted_sum_labels_plus() {
        let mut src = RotatingHyperplaneSource::new(1, 1, 0.0, 3).unwrap();
        src.theta = vec![[1.0, 0.0, 0.0]];
        let mut saw_plus = false;
        for _ in 0..50 {
            let slot = src.next_slot().unwrap();
            if slot.features[0][0] >= 0.0 {
                assert_eq!(slot.label, BinaryLabel::Plus);
                saw_plus = true;
            } else {
                assert_eq!(slot.label, BinaryLabel::Minus);
            }
        }
        assert!(saw_plus);
    }

    #[test]
    fn same_seed_reproduces_the_stream() {
        let mut a = RotatingHyperplaneSource::new(4, 2, 0.1, 7).unwrap();
        let mut b = RotatingHyperplaneSource::new(4, 2, 0.1, 7).unwrap();
        for _ in 0..50 {
            assert_eq!(a.next_slot().unwrap(), b.next_slot().unwrap());
        }
    }

    #[test]
    fn label_balance_is_roughly_symmetric() {
        let mut src = RotatingHyperplaneSource::new(4, 2, 0.1, 5).unwrap();
        let n = 10_000;
        let plus = (0..n)
            .filter(|_| src.next_slot().unwrap().label == BinaryLabel::Plus)
            .count();
        let frac = plus as f64 / n as f64;
        assert!((0.35..=0.65).contains(&frac), "plus fraction {frac}");
    }

    #[test]
    fn irrelevant_learners_are_uncorrelated_with_the_label() {
        let mut src = RotatingHyperplaneSource::new(3, 1, 0.1, 9).unwrap();
        let n = 10_000usize;
        let mut sum_xy = [0.0f64; 3];
        for _ in 0..n {
            let slot = src.next_slot().unwrap();
            let y = slot.label.value() as f64;
            for (d, s) in sum_xy.iter_mut().enumerate() {
                *s += slot.features[2][d] * y;
            }
        }
        // x is uniform on [-1,1] (std 0.577); the correlation estimate has
        // standard error about 0.577/sqrt(n)
        for s in sum_xy {
            let corr = s / n as f64;
            assert!(corr.abs() < 4.0 * 0.58 / (n as f64).sqrt(), "corr {corr}");
        }
    }

    #[test]
    fn drifting_walk_advances_the_concept_every_slot() {
        let mut src = RotatingHyperplaneSource::new(2, 1, 0.1, 1).unwrap();
        assert_eq!(src.next_slot().unwrap().concept, 0);
        assert_eq!(src.next_slot().unwrap().concept, 1);
        assert_eq!(src.next_slot().unwrap().concept, 2);
    }
}
