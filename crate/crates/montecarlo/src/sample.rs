use std::f64::consts::TAU;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::CMatrix;
use crate::{McError, MAX_N};

/// One draw of `X_N`: the angles `θᵢ` with `ζᵢ = exp(2πiθᵢ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeSample {
    angles: Vec<f64>,
}

impl VandermondeSample {
    pub fn from_angles(angles: Vec<f64>) -> Result<Self, McError> {
        check_n(angles.len())?;
        Ok(VandermondeSample { angles })
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `X[i,j] = N^{-1/2} ζᵢ^j` for `i, j = 1..N`. Powers are reduced mod 1
    /// in angle space before taking sin/cos.
    pub fn matrix(&self) -> CMatrix {
        let n = self.n();
        let s = 1.0 / (n as f64).sqrt();
        let mut re = Array2::zeros((n, n));
        let mut im = Array2::zeros((n, n));
        for (i, a) in self.angles.iter().enumerate() {
            for j in 0..n {
                let phase = (a * (j + 1) as f64).fract() * TAU;
                let (sin, cos) = phase.sin_cos();
                re[[i, j]] = s * cos;
                im[[i, j]] = s * sin;
            }
        }
        CMatrix { re, im }
    }
}

fn check_n(n: usize) -> Result<(), McError> {
    if n == 0 {
        return Err(McError::Argument("matrix size N must be at least 1".into()));
    }
    if n > MAX_N {
        return Err(McError::ResourceLimit(format!("N = {n} exceeds the cap of {MAX_N}")));
    }
    Ok(())
}

/// Trial `trial` of a run seeded with `seed`. Each trial reads its own
/// ChaCha stream, so results do not depend on scheduling.
pub fn sample_trial(n: usize, seed: u64, trial: u64) -> Result<VandermondeSample, McError> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    Ok(VandermondeSample { angles: (0..n).map(|_| rng.random::<f64>()).collect() })
}

pub fn sample(n: usize, seed: u64) -> Result<VandermondeSample, McError> {
    sample_trial(n, seed, 0)
}
