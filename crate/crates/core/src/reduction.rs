//! Growing a scaffold into a total order.
//!
//! [`simplify`] applies the three safe rules to a fixpoint:
//!
//! * a pair slot whose mask already excludes `>` (or `<`) is split in the
//!   orientation that removes nothing;
//! * every link of a chain that no chain link uses in the opposite orientation
//!   is oriented so that the chain breaks;
//! * every quad of variables is made locally consistent.
//!
//! [`r_tot`] then alternates `simplify` with greedy splits of the lowest
//! undecided pair, which always yields a total order. [`r_corr`] does the
//! same but asks an exact oracle before each greedy split, and stops when
//! neither orientation keeps the network satisfiable.

use crate::algebra::{AtomicRelation, RelSet};
use crate::consistency::tighten_quad;
use crate::error::Result;
use crate::network::Network;
use crate::orders::{compose_in_place, PairedOrder, Slot};
use crate::structure::{find_chains, unopposed_in, Chain};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub rule2_fires: u64,
    pub rule3_fires: u64,
    pub rule4_fires: u64,
    pub greedy_steps: u64,
}

impl ReductionStats {
    pub fn rule_fires(&self) -> u64 {
        self.rule2_fires + self.rule3_fires + self.rule4_fires
    }

    pub fn absorb(&mut self, other: &ReductionStats) {
        self.rule2_fires += other.rule2_fires;
        self.rule3_fires += other.rule3_fires;
        self.rule4_fires += other.rule4_fires;
        self.greedy_steps += other.greedy_steps;
    }
}

/// A scaffold together with the network restricted by it. The network is
/// kept composed with the scaffold after every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionState {
    pub scaffold: PairedOrder,
    pub net: Network,
    pub stats: ReductionStats,
}

impl ReductionState {
    pub fn new(scaffold: PairedOrder, f: &Network) -> ReductionState {
        assert_eq!(scaffold.n(), f.n(), "scaffold and network sizes differ");
        let mut net = f.clone();
        compose_in_place(&scaffold, &mut net);
        ReductionState { scaffold, net, stats: ReductionStats::default() }
    }

    fn split(&mut self, first: usize, second: usize) {
        self.scaffold = self.scaffold.extend(first, second).expect("splitting a pair slot");
        let s = self.net.get(first, second).without(AtomicRelation::Gt);
        self.net.set(first, second, s);
    }

    fn lowest_pair(&self) -> Option<(usize, usize)> {
        self.scaffold.slots().iter().find_map(|s| match *s {
            Slot::Pair(a, b) => Some((a.min(b), a.max(b))),
            Slot::Single(_) => None,
        })
    }

    /// Same scaffold and network; statistics are ignored.
    pub fn same_outcome(&self, other: &ReductionState) -> bool {
        self.scaffold == other.scaffold && self.net == other.net
    }
}

/// Splits the first pair slot whose mask misses `<` or `>`.
fn rule2(state: &mut ReductionState) -> bool {
    for slot in state.scaffold.slots() {
        if let Slot::Pair(x, y) = *slot {
            let s = state.net.get(x, y);
            let (first, second) = match (s.contains(AtomicRelation::Lt), s.contains(AtomicRelation::Gt)) {
                (true, true) => continue,
                (true, false) => (x, y),
                (false, true) => (y, x),
                (false, false) => (x.min(y), x.max(y)),
            };
            state.split(first, second);
            state.stats.rule2_fires += 1;
            return true;
        }
    }
    false
}

/// One sweep of quad local consistency; true if any mask shrank.
fn rule4(state: &mut ReductionState) -> bool {
    let n = state.net.n();
    let mut changed = false;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if tighten_quad(&mut state.net, [a, b, c, d]) {
                        state.stats.rule4_fires += 1;
                        changed = true;
                        if state.net.get(a, b).is_empty() || state.net.has_empty() {
                            return true;
                        }
                    }
                }
            }
        }
    }
    changed
}

/// Orients every pair of every unopposed chain link in the breaking
/// direction, `b` before `a`.
fn rule3(state: &mut ReductionState) -> bool {
    if state.scaffold.pair_count() == 0 {
        return false;
    }
    let chains = find_chains(&state.scaffold, &state.net);
    let free = unopposed_in(&chains);
    if free.is_empty() {
        return false;
    }
    for link in &free {
        for &(a, b) in &link.pairs {
            if state.scaffold.pair_mate(b) == Some(a) {
                state.split(b, a);
            }
        }
        state.stats.rule3_fires += 1;
    }
    true
}

/// Applies the simplification rules until none fires or a mask empties.
pub fn simplify(state: &mut ReductionState) {
    loop {
        if state.scaffold.is_total() || state.net.has_empty() {
            return;
        }
        if rule2(state) {
            continue;
        }
        if state.net.n() >= 4 && rule4(state) {
            continue;
        }
        if rule3(state) {
            continue;
        }
        return;
    }
}

/// Greedy completion to a total order in polynomial time. Completeness is
/// only argued over all scaffolds together: for a satisfiable instance some
/// scaffold reaches a satisfiable total order.
pub fn r_tot(p: &PairedOrder, f: &Network) -> ReductionState {
    let mut state = ReductionState::new(p.clone(), f);
    loop {
        simplify(&mut state);
        match state.lowest_pair() {
            None => return state,
            Some((x, y)) => {
                state.split(x, y);
                state.stats.greedy_steps += 1;
            }
        }
    }
}

/// Like [`r_tot`], but each greedy split is checked by `oracle`, an exact
/// decision procedure on networks. If neither orientation of the lowest pair
/// keeps the network satisfiable, the current state is returned as is.
pub fn r_corr<O>(p: &PairedOrder, f: &Network, oracle: &mut O) -> Result<ReductionState>
where
    O: FnMut(&Network) -> Result<bool>,
{
    Ok(r_corr_traced(p, f, oracle)?.0)
}

/// [`r_corr`] plus the state at which the oracle first overruled the greedy
/// orientation, if it did.
fn r_corr_traced<O>(p: &PairedOrder, f: &Network, oracle: &mut O) -> Result<(ReductionState, Option<ReductionState>)>
where
    O: FnMut(&Network) -> Result<bool>,
{
    let mut state = ReductionState::new(p.clone(), f);
    let mut divergence = None;
    loop {
        simplify(&mut state);
        let Some((x, y)) = state.lowest_pair() else {
            return Ok((state, divergence));
        };
        let mut chosen = None;
        for (first, second) in [(x, y), (y, x)] {
            let mut trial = state.net.clone();
            trial.refine(first, second, RelSet::FULL.without(AtomicRelation::Gt));
            if oracle(&trial)? {
                chosen = Some((first, second));
                break;
            }
        }
        if chosen == Some((y, x)) && divergence.is_none() {
            divergence = Some(state.clone());
        }
        match chosen {
            Some((first, second)) => {
                state.split(first, second);
                state.stats.greedy_steps += 1;
            }
            None => return Ok((state, divergence)),
        }
    }
}

/// Outcome of comparing [`r_tot`] with [`r_corr`] on one scaffold.
#[derive(Clone, Debug)]
pub struct Reducibility {
    pub reducible: bool,
    pub tot: ReductionState,
    pub corr: ReductionState,
    /// The state at which the oracle first overruled the greedy choice.
    pub divergence: Option<ReductionState>,
}

impl Reducibility {
    /// Chains at the point of divergence, if any.
    pub fn divergence_chains(&self) -> Vec<Chain> {
        self.divergence
            .as_ref()
            .map(|s| find_chains(&s.scaffold, &s.net))
            .unwrap_or_default()
    }
}

pub fn reducibility<O>(p: &PairedOrder, f: &Network, oracle: &mut O) -> Result<Reducibility>
where
    O: FnMut(&Network) -> Result<bool>,
{
    let tot = r_tot(p, f);
    let (corr, divergence) = r_corr_traced(p, f, oracle)?;
    Ok(Reducibility { reducible: tot.same_outcome(&corr), tot, corr, divergence })
}

/// Whether `r_tot` and `r_corr` agree on `(p, f)`.
pub fn is_reducible<O>(p: &PairedOrder, f: &Network, oracle: &mut O) -> Result<bool>
where
    O: FnMut(&Network) -> Result<bool>,
{
    Ok(reducibility(p, f, oracle)?.reducible)
}
