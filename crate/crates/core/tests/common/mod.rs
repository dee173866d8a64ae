#![allow(dead_code)]

use pot_core::instancegen::{gen_planted, gen_uniform, GenMode, GenSpec};
use pot_core::{Instance, RelSet};

/// Mixed random suite: uniform, planted, planted with one constraint
/// replaced, and uniform over small relation sets.
pub fn suite_instance(n: usize, seed: u64) -> Instance {
    let density = 0.3 + 0.1 * (seed % 8) as f64;
    match seed % 4 {
        0 => gen_uniform(&GenSpec::new(n, density, seed, GenMode::Uniform)).unwrap(),
        1 => gen_planted(&GenSpec::new(n, density, seed, GenMode::Planted)).unwrap().0,
        2 => {
            let (mut ins, _) = gen_planted(&GenSpec::new(n, 1.0, seed, GenMode::Planted)).unwrap();
            let k = (seed / 4) as usize % ins.constraints.len();
            ins.constraints[k].rels = RelSet::from_bits(1 + (seed / 7 % 15) as u8);
            ins
        }
        _ => {
            let mut w = [0.0; 15];
            for s in RelSet::non_empty() {
                w[s.bits() as usize - 1] = match s.len() {
                    1 => 1.0,
                    2 => 2.0,
                    _ => 0.0,
                };
            }
            let spec = GenSpec { mask_weights: Some(w), ..GenSpec::new(n, density, seed, GenMode::Uniform) };
            gen_uniform(&spec).unwrap()
        }
    }
}
