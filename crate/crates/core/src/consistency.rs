//! Triple propagation, the polynomial solver for a fixed total order, and
//! local consistency over small variable subsets.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use crate::algebra::{AtomicRelation, RelSet};
use crate::error::{PotError, Result};
use crate::network::{extract_model, realizable, Model, Network};
use crate::orders::{compose_in_place, PairedOrder};

/// Largest subset accepted by [`local_consistency`].
pub const K_MAX: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropagationReport {
    pub changed: bool,
    pub empty_pair_found: bool,
    /// Passes over the dirty-pair queue, the last one being change-free unless
    /// a mask emptied.
    pub rounds: usize,
}

/// Path consistency: refines every `rel(x, z)` by `rel(x, y) ∘ rel(y, z)`
/// until nothing changes.
pub fn propagate_triples(f: &Network) -> (Network, PropagationReport) {
    let mut g = f.clone();
    let report = propagate_in_place(&mut g);
    (g, report)
}

/// In-place [`propagate_triples`]. Stops as soon as a mask empties.
pub fn propagate_in_place(g: &mut Network) -> PropagationReport {
    let n = g.n();
    let mut report = PropagationReport::default();
    if g.has_empty() {
        report.empty_pair_found = true;
        return report;
    }
    let mut dirty = vec![false; n * n];
    let mut queue: Vec<(usize, usize)> = g.pairs().collect();
    let mut next = Vec::new();
    while !queue.is_empty() {
        report.rounds += 1;
        queue.sort_unstable();
        for &(i, j) in &queue {
            dirty[i * n + j] = false;
        }
        for &(i, j) in &queue {
            let rij = g.get(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if g.refine(i, k, rij.compose(g.get(j, k))) {
                    report.changed = true;
                    if g.get(i, k).is_empty() {
                        report.empty_pair_found = true;
                        return report;
                    }
                    mark(&mut dirty, &mut next, n, i, k);
                }
                if g.refine(k, j, g.get(k, i).compose(g.get(i, j))) {
                    report.changed = true;
                    if g.get(k, j).is_empty() {
                        report.empty_pair_found = true;
                        return report;
                    }
                    mark(&mut dirty, &mut next, n, k, j);
                }
            }
        }
        std::mem::swap(&mut queue, &mut next);
        next.clear();
    }
    report
}

#[inline]
fn mark(dirty: &mut [bool], next: &mut Vec<(usize, usize)>, n: usize, a: usize, b: usize) {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    if !dirty[i * n + j] {
        dirty[i * n + j] = true;
        next.push((i, j));
    }
}

/// Result of solving a network under a fixed total order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TotalOrderOutcome {
    Model(Model),
    No,
    /// The pipeline ended on an atomic network that is not realizable. Counted
    /// as a no, and tracked because it should never happen.
    Unrealizable,
}

impl TotalOrderOutcome {
    pub fn model(self) -> Option<Model> {
        match self {
            TotalOrderOutcome::Model(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, TotalOrderOutcome::Model(_))
    }
}

/// Decides `t ∘ f` for a total order `t` in polynomial time.
///
/// Propagate, drop `=` from every non-singleton mask, propagate again, then
/// collapse every mask that still allows `||` to `{||}`. What is left is
/// atomic; it is checked for realizability before a model is returned.
pub fn solve_under_total_order(t: &PairedOrder, f: &Network) -> Result<TotalOrderOutcome> {
    if t.n() != f.n() {
        return Err(PotError::Input(format!("order has {} variables, network {}", t.n(), f.n())));
    }
    if !t.is_total() {
        return Err(PotError::Contract("scaffold is not a total order".into()));
    }
    let mut g = f.clone();
    compose_in_place(t, &mut g);
    Ok(solve_composed(g))
}

/// The sub-solver on a network already restricted by a total order.
pub(crate) fn solve_composed(mut g: Network) -> TotalOrderOutcome {
    if propagate_in_place(&mut g).empty_pair_found {
        return TotalOrderOutcome::No;
    }
    let wide: Vec<(usize, usize)> = g.pairs().filter(|&(i, j)| g.get(i, j).len() > 1).collect();
    for (i, j) in wide {
        g.set(i, j, g.get(i, j).without(AtomicRelation::Eq));
    }
    if propagate_in_place(&mut g).empty_pair_found {
        return TotalOrderOutcome::No;
    }
    let pairs: Vec<(usize, usize)> = g.pairs().collect();
    for (i, j) in pairs {
        let s = g.get(i, j);
        if s.is_empty() {
            return TotalOrderOutcome::No;
        }
        if s.contains(AtomicRelation::Inc) {
            g.set(i, j, RelSet::INC);
        }
    }
    if !realizable(&g) {
        return TotalOrderOutcome::Unrealizable;
    }
    TotalOrderOutcome::Model(extract_model(&g).expect("realizable network yields a model"))
}

/// Maximally general `f' ≼ f` that is locally consistent over `s`: every
/// mask inside `s` becomes the union of the relations taken by realizable
/// atomic assignments to `s` that lie inside `f`.
pub fn local_consistency(f: &Network, s: &[usize]) -> Result<Network> {
    local_consistency_with_limit(f, s, K_MAX)
}

pub fn local_consistency_with_limit(f: &Network, s: &[usize], k_max: usize) -> Result<Network> {
    if s.len() > k_max {
        return Err(PotError::Input(format!("subset of size {} exceeds the limit {k_max}", s.len())));
    }
    for (a, &x) in s.iter().enumerate() {
        if x >= f.n() || s[..a].contains(&x) {
            return Err(PotError::Input(format!("bad subset {s:?}")));
        }
    }
    let mut out = f.clone();
    if s.len() == 4 {
        let quad = [s[0], s[1], s[2], s[3]];
        tighten_quad(&mut out, quad);
        return Ok(out);
    }
    let k = s.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut union = vec![RelSet::EMPTY; pairs.len()];
    let mut sub = Network::unconstrained(k);
    enumerate_inside(f, s, &pairs, 0, &mut sub, &mut union);
    for (p, &(a, b)) in pairs.iter().enumerate() {
        out.set(s[a], s[b], union[p]);
    }
    Ok(out)
}

fn enumerate_inside(
    f: &Network,
    s: &[usize],
    pairs: &[(usize, usize)],
    p: usize,
    sub: &mut Network,
    union: &mut [RelSet],
) {
    if p == pairs.len() {
        if realizable(sub) {
            for (q, &(a, b)) in pairs.iter().enumerate() {
                union[q] |= sub.get(a, b);
            }
        }
        return;
    }
    let (a, b) = pairs[p];
    for r in f.get(s[a], s[b]).iter() {
        sub.set(a, b, r.into());
        enumerate_inside(f, s, pairs, p + 1, sub, union);
    }
}

/// The six pairs of a quad, in key order.
const QUAD_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// 12-bit codes (six 2-bit atomic indices) of the realizable atomic networks
/// on four variables.
fn realizable_quad_codes() -> &'static [u16] {
    static CODES: OnceLock<Vec<u16>> = OnceLock::new();
    CODES.get_or_init(|| {
        (0u16..4096)
            .filter(|&code| {
                let net = Network::from_upper(
                    4,
                    (0..6).map(|p| RelSet::single(AtomicRelation::from_index((code >> (2 * p)) as usize))),
                );
                realizable(&net)
            })
            .collect()
    })
}

const COMPUTED: u32 = 1 << 31;

/// Lazily filled memo from the 24-bit key of six quad masks to the 24-bit
/// union of survivors.
fn quad_table() -> &'static [AtomicU32] {
    static TABLE: OnceLock<Box<[AtomicU32]>> = OnceLock::new();
    TABLE.get_or_init(|| (0..1usize << 24).map(|_| AtomicU32::new(0)).collect())
}

fn quad_closure(key: u32) -> u32 {
    let slot = &quad_table()[key as usize];
    let cached = slot.load(Ordering::Relaxed);
    if cached & COMPUTED != 0 {
        return cached & !COMPUTED;
    }
    let mut union = 0u32;
    for &code in realizable_quad_codes() {
        let mut bits = 0u32;
        let mut inside = true;
        for p in 0..6 {
            let atom = 1u32 << ((code >> (2 * p)) & 3);
            if (key >> (4 * p)) & atom == 0 {
                inside = false;
                break;
            }
            bits |= atom << (4 * p);
        }
        if inside {
            union |= bits;
        }
    }
    slot.store(union | COMPUTED, Ordering::Relaxed);
    union
}

/// Applies local consistency over one quad in place; returns whether any mask
/// shrank.
pub(crate) fn tighten_quad(g: &mut Network, quad: [usize; 4]) -> bool {
    let mut key = 0u32;
    for (p, &(a, b)) in QUAD_PAIRS.iter().enumerate() {
        key |= (g.get(quad[a], quad[b]).bits() as u32) << (4 * p);
    }
    let closed = quad_closure(key);
    if closed == key {
        return false;
    }
    for (p, &(a, b)) in QUAD_PAIRS.iter().enumerate() {
        g.set(quad[a], quad[b], RelSet::from_bits((closed >> (4 * p)) as u8 & 0xf));
    }
    true
}
