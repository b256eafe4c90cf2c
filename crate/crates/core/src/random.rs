//! Seeded random two-qubit states for property checks.
//!
//! A state is a random pure state (Gaussian amplitudes, normalised) mixed
//! with `I/4` at a uniform random weight, so the ensemble covers both nearly
//! pure and nearly maximally mixed states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::density::{DensityMatrix4, C64};

pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let mut amp = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let psi = [amp(), amp(), amp(), amp()];
    let weight: f64 = rng.random();
    let pure = DensityMatrix4::from_pure(&psi).expect("gaussian amplitudes are nonzero almost surely");
    let mixed = pure.matrix().scale(weight) + DensityMatrix4::maximally_mixed().matrix().scale(1.0 - weight);
    DensityMatrix4::from_channel_output(mixed)
}

/// `count` states from a ChaCha8 stream seeded with `seed`.
pub fn random_states(seed: u64, count: usize) -> Vec<DensityMatrix4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_state(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::validate;

    #[test]
    fn states_are_valid_and_reproducible() {
        let a = random_states(7, 50);
        assert!(a.iter().all(|s| validate(s.matrix()).passed));
        assert_eq!(a, random_states(7, 50));
        assert_ne!(a, random_states(8, 50));
    }
}
