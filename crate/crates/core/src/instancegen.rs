//! Seeded random instances.
//!
//! Planted instances are relaxations of a hidden partial order and are
//! therefore satisfiable; uniform instances are not controlled.

use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::RelSet;
use crate::error::{PotError, Result};
use crate::network::{extract_model, Instance, Model, Network};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenMode {
    Planted,
    Uniform,
}

impl FromStr for GenMode {
    type Err = PotError;

    fn from_str(s: &str) -> Result<GenMode> {
        match s {
            "planted" => Ok(GenMode::Planted),
            "uniform" => Ok(GenMode::Uniform),
            _ => Err(PotError::Input(format!("unknown mode {s:?} (expected planted or uniform)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    /// Probability that a pair is constrained.
    pub density: f64,
    pub seed: u64,
    pub mode: GenMode,
    /// Weights over the 15 non-empty relation sets, indexed by `bits - 1`.
    /// Uniform mode only; `None` means uniform.
    pub mask_weights: Option<[f64; 15]>,
}

impl GenSpec {
    pub fn new(n: usize, density: f64, seed: u64, mode: GenMode) -> GenSpec {
        GenSpec { n, density, seed, mode, mask_weights: None }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(PotError::Input("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(PotError::Input(format!("density {} is outside [0, 1]", self.density)));
        }
        Ok(())
    }
}

/// Generates according to `spec.mode`; the model is present in planted mode.
pub fn generate(spec: &GenSpec) -> Result<(Instance, Option<Model>)> {
    match spec.mode {
        GenMode::Planted => gen_planted(spec).map(|(i, m)| (i, Some(m))),
        GenMode::Uniform => gen_uniform(spec).map(|i| (i, None)),
    }
}

/// A random partial order with merged points, read off as an atomic network
/// and relaxed: each pair is constrained with probability `density` by a
/// uniformly chosen superset of its true relation.
pub fn gen_planted(spec: &GenSpec) -> Result<(Instance, Model)> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let k = rng.gen_range(1..=n);
    let edge_p: f64 = rng.gen();
    let mut topo: Vec<usize> = (0..k).collect();
    topo.shuffle(&mut rng);
    let mut lt = vec![false; k * k];
    for a in 0..k {
        for b in a + 1..k {
            if rng.gen_bool(edge_p) {
                lt[topo[a] * k + topo[b]] = true;
            }
        }
    }
    // Transitive closure along the topological order.
    for &mid in &topo {
        for c in 0..k {
            if lt[c * k + mid] {
                for d in 0..k {
                    lt[c * k + d] |= lt[mid * k + d];
                }
            }
        }
    }
    let class_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut truth = Network::unconstrained(n);
    for i in 0..n {
        for j in i + 1..n {
            let (c, d) = (class_of[i], class_of[j]);
            let r = if c == d {
                RelSet::EQ
            } else if lt[c * k + d] {
                RelSet::LT
            } else if lt[d * k + c] {
                RelSet::GT
            } else {
                RelSet::INC
            };
            truth.set(i, j, r);
        }
    }
    let model = extract_model(&truth)?;

    let mut ins = Instance::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(spec.density) {
                let atom = truth.get(i, j);
                let others = RelSet::FULL.bits() & !atom.bits();
                let extra = loop {
                    let e: u8 = rng.gen_range(0..16);
                    if e & !others == 0 {
                        break e;
                    }
                };
                ins.push(i, j, RelSet::from_bits(atom.bits() | extra));
            }
        }
    }
    Ok((ins, model))
}

/// Each pair constrained with probability `density` by a relation set drawn
/// from `mask_weights`.
pub fn gen_uniform(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let weights = spec.mask_weights.unwrap_or([1.0; 15]);
    let dist = WeightedIndex::new(weights).map_err(|e| PotError::Input(format!("bad mask weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut ins = Instance::new(spec.n);
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            if rng.gen_bool(spec.density) {
                ins.push(i, j, RelSet::from_bits(dist.sample(&mut rng) as u8 + 1));
            }
        }
    }
    Ok(ins)
}
