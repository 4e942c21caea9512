//! Named synthetic setups used by the command line, the examples, and the
//! test suites. Direction vectors and limits come from a fixed-seed
//! generator, so every materialization of a preset is identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequences::GeometricScale;
use crate::space::{Vector, Weighting};

/// Static description of one preset.
#[derive(Debug, Clone, Copy)]
pub struct PresetSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub dim: usize,
    pub nodes: &'static [f64],
    pub alpha: &'static [f64],
    /// Uniform perturbation amplitude; `None` gives the exact family.
    pub perturbation: Option<f64>,
    /// Seed for direction vectors and the limit; `None` uses unit
    /// directions and a zero limit (the closed-form scalar setups).
    pub seed: Option<u64>,
}

/// Materialized preset: family, model parameters, and default weighting.
pub struct PresetParts<S: Scalar> {
    pub scale: GeometricScale<S>,
    pub limit: Vector<S>,
    pub alpha: Vec<S>,
    pub weighting: Weighting<S>,
}

pub const ALL: &[PresetSpec] = &[
    PresetSpec {
        name: "g3",
        description: "three geometric scales (0.8, 0.4, 0.2) in dimension 4, all coefficients one",
        dim: 4,
        nodes: &[0.8, 0.4, 0.2],
        alpha: &[1.0, 1.0, 1.0],
        perturbation: None,
        seed: Some(1001),
    },
    PresetSpec {
        name: "g4",
        description: "four geometric scales (0.8, 0.4, 0.2, 0.1) in dimension 4, all coefficients one",
        dim: 4,
        nodes: &[0.8, 0.4, 0.2, 0.1],
        alpha: &[1.0, 1.0, 1.0, 1.0],
        perturbation: None,
        seed: Some(1002),
    },
    PresetSpec {
        name: "plateau",
        description: "four geometric scales with the third coefficient zero, so columns 2 and 3 converge at the same rate",
        dim: 4,
        nodes: &[0.8, 0.4, 0.2, 0.1],
        alpha: &[1.0, 1.0, 0.0, 1.0],
        perturbation: None,
        seed: Some(1003),
    },
    PresetSpec {
        name: "divergent",
        description: "a divergent sequence (node 1.25) whose first column still recovers the antilimit",
        dim: 2,
        nodes: &[1.25, 0.4],
        alpha: &[1.0, 1.0],
        perturbation: None,
        seed: Some(1004),
    },
    PresetSpec {
        name: "scalar2",
        description: "scalar case with nodes (0.5, 0.25), unit directions, zero limit; all limit quantities in closed form",
        dim: 1,
        nodes: &[0.5, 0.25],
        alpha: &[1.0, 1.0],
        perturbation: None,
        seed: None,
    },
    PresetSpec {
        name: "perturbed3",
        description: "three asymptotically geometric scales (amplitude 0.3) in dimension 4",
        dim: 4,
        nodes: &[0.8, 0.4, 0.2],
        alpha: &[1.0, 1.0, 1.0],
        perturbation: Some(0.3),
        seed: Some(1005),
    },
];

/// Look up a preset by name.
pub fn named(name: &str) -> Option<&'static PresetSpec> {
    ALL.iter().find(|p| p.name == name)
}

impl PresetSpec {
    /// Build the preset's family, model parameters, and default weighting in
    /// the requested field.
    pub fn materialize<S: Scalar>(&self) -> Result<PresetParts<S>> {
        let (weights, limit) = match self.seed {
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // Positive components keep every <y, w_i> away from zero
                // for the all-ones weighting.
                let weights: Vec<Vector<S>> = (0..self.nodes.len())
                    .map(|_| {
                        (0..self.dim)
                            .map(|_| S::from_f64(rng.random_range(0.25..1.75)))
                            .collect()
                    })
                    .collect();
                let limit: Vector<S> = (0..self.dim)
                    .map(|_| S::from_f64(rng.random_range(-2.0..2.0)))
                    .collect();
                (weights, limit)
            }
            None => (
                vec![Vector::new(vec![S::one(); self.dim]); self.nodes.len()],
                Vector::zeros(self.dim),
            ),
        };
        let nodes: Vec<S> = self.nodes.iter().map(|&b| S::from_f64(b)).collect();
        let scale = match self.perturbation {
            Some(c) => GeometricScale::perturbed(
                weights,
                nodes,
                vec![S::from_f64(c); self.nodes.len()],
            )?,
            None => GeometricScale::geometric(weights, nodes)?,
        };
        let weighting = Weighting::ones(self.dim);
        for (i, w) in scale.weights().iter().enumerate() {
            if weighting.apply(w)?.modulus() == 0.0 {
                return Err(Error::DegenerateProfile {
                    reason: format!("preset {} direction {i} is orthogonal to the weighting", self.name),
                });
            }
        }
        Ok(PresetParts {
            scale,
            limit,
            alpha: self.alpha.iter().map(|&a| S::from_f64(a)).collect(),
            weighting,
        })
    }
}
