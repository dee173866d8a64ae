//! Scaffolds: totally ordered sequences of pair and singleton slots.
//!
//! A [`PairedOrder`] with only singleton slots is a total order. With pair
//! slots it is a total ordering of pairs: the two members of a pair slot are
//! incomparable, everything else is ordered by slot position. Proper ones
//! (every variable paired, except the maximum when `n` is odd) are enumerated
//! by rank so that rank ranges can be handed to separate workers.

use std::fmt;
use std::ops::Range;

use crate::algebra::{AtomicRelation, RelSet};
use crate::error::{PotError, Result};
use crate::network::Network;

/// Largest `n` for which scaffold ranks fit in a `u64`.
pub const MAX_RANKED_N: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Single(usize),
    Pair(usize, usize),
}

impl Slot {
    pub fn contains(self, v: usize) -> bool {
        match self {
            Slot::Single(x) => x == v,
            Slot::Pair(a, b) => a == v || b == v,
        }
    }
}

/// Anything that induces an atomic relation between every two variables.
pub trait PointOrder {
    fn n(&self) -> usize;
    fn relation(&self, x: usize, y: usize) -> AtomicRelation;
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairedOrder {
    slots: Vec<Slot>,
    position: Vec<usize>,
}

impl PairedOrder {
    pub fn new(slots: Vec<Slot>) -> Result<PairedOrder> {
        let n: usize = slots
            .iter()
            .map(|s| match s {
                Slot::Single(_) => 1,
                Slot::Pair(..) => 2,
            })
            .sum();
        let mut position = vec![usize::MAX; n];
        for (k, slot) in slots.iter().enumerate() {
            let members: &[usize] = match slot {
                Slot::Single(x) => &[*x][..],
                Slot::Pair(a, b) => &[*a, *b][..],
            };
            for &v in members {
                if v >= n || position[v] != usize::MAX {
                    return Err(PotError::Input(format!("variable {v} missing, repeated or out of range in scaffold")));
                }
                position[v] = k;
            }
        }
        Ok(PairedOrder { slots, position })
    }

    /// The total order listing `perm` from first to last.
    pub fn from_permutation(perm: &[usize]) -> Result<PairedOrder> {
        PairedOrder::new(perm.iter().map(|&v| Slot::Single(v)).collect())
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    #[inline]
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn n(&self) -> usize {
        self.position.len()
    }

    #[inline]
    pub fn before(&self, x: usize, y: usize) -> bool {
        self.position[x] < self.position[y]
    }

    pub fn pair_mate(&self, v: usize) -> Option<usize> {
        match self.slots[self.position[v]] {
            Slot::Pair(a, b) if a == v => Some(b),
            Slot::Pair(a, b) if b == v => Some(a),
            _ => None,
        }
    }

    pub fn is_total(&self) -> bool {
        self.slots.iter().all(|s| matches!(s, Slot::Single(_)))
    }

    pub fn pair_count(&self) -> usize {
        self.slots.iter().filter(|s| matches!(s, Slot::Pair(..))).count()
    }

    /// Every variable is paired, except for odd `n` a single maximum.
    pub fn is_proper(&self) -> bool {
        let n = self.n();
        let last = self.slots.len().saturating_sub(1);
        self.slots.iter().enumerate().all(|(k, s)| match s {
            Slot::Pair(..) => true,
            Slot::Single(_) => n % 2 == 1 && k == last,
        })
    }

    /// Variables in slot order; pair members keep their stored order.
    pub fn linear(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        for s in &self.slots {
            match *s {
                Slot::Single(x) => out.push(x),
                Slot::Pair(a, b) => out.extend([a, b]),
            }
        }
        out
    }

    /// Splits the pair slot `{x, y}` into `x` immediately followed by `y`.
    pub fn extend(&self, x: usize, y: usize) -> Result<PairedOrder> {
        if x >= self.n() || y >= self.n() || self.pair_mate(x) != Some(y) {
            return Err(PotError::Contract(format!("{x} and {y} are not pair-mates")));
        }
        let k = self.position[x];
        let mut slots = Vec::with_capacity(self.slots.len() + 1);
        slots.extend_from_slice(&self.slots[..k]);
        slots.push(Slot::Single(x));
        slots.push(Slot::Single(y));
        slots.extend_from_slice(&self.slots[k + 1..]);
        let mut position = self.position.clone();
        for p in position.iter_mut() {
            if *p > k {
                *p += 1;
            }
        }
        position[y] = k + 1;
        Ok(PairedOrder { slots, position })
    }

    /// Whether every strict order decision of `self` also holds in `other`.
    pub fn is_stub_of(&self, other: &PairedOrder) -> bool {
        self.n() == other.n()
            && (0..self.n()).all(|x| (0..self.n()).all(|y| !self.before(x, y) || other.before(x, y)))
    }
}

impl PointOrder for PairedOrder {
    fn n(&self) -> usize {
        self.position.len()
    }

    fn relation(&self, x: usize, y: usize) -> AtomicRelation {
        use std::cmp::Ordering::*;
        match self.position[x].cmp(&self.position[y]) {
            Less => AtomicRelation::Lt,
            Greater => AtomicRelation::Gt,
            Equal if x == y => AtomicRelation::Eq,
            Equal => AtomicRelation::Inc,
        }
    }
}

impl fmt::Debug for PairedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.slots.iter().enumerate() {
            if k > 0 {
                write!(f, " < ")?;
            }
            match s {
                Slot::Single(x) => write!(f, "{x}")?,
                Slot::Pair(a, b) => write!(f, "{{{a},{b}}}")?,
            }
        }
        write!(f, "]")
    }
}

/// Restricts `f` by the order decisions of `p`: `x` before `y` drops `>`,
/// `x` equal to `y` keeps only `=`, incomparable pairs are left alone.
pub fn compose_with<P: PointOrder>(p: &P, f: &Network) -> Result<Network> {
    if p.n() != f.n() {
        return Err(PotError::Input(format!("scaffold has {} variables, network {}", p.n(), f.n())));
    }
    let mut g = f.clone();
    compose_in_place(p, &mut g);
    Ok(g)
}

pub(crate) fn compose_in_place<P: PointOrder>(p: &P, g: &mut Network) {
    for (x, y) in g.pairs() {
        let s = g.get(x, y);
        let t = match p.relation(x, y) {
            AtomicRelation::Lt => s.without(AtomicRelation::Gt),
            AtomicRelation::Gt => s.without(AtomicRelation::Lt),
            AtomicRelation::Eq => s & RelSet::EQ,
            AtomicRelation::Inc => s,
        };
        if t != s {
            g.set(x, y, t);
        }
    }
}

/// `n! / 2^(n/2)`, the number of proper scaffolds on `n` variables.
pub fn ptop_count(n: usize) -> u64 {
    assert!(n <= MAX_RANKED_N, "n = {n} exceeds the rankable range");
    let fact: u64 = (1..=n as u64).product();
    fact >> (n / 2)
}

pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_RANKED_N, "n = {n} exceeds the rankable range");
    (1..=n as u64).product()
}

fn pair_radices(n: usize) -> Vec<u64> {
    (0..n / 2)
        .map(|k| {
            let m = (n - 2 * k) as u64;
            m * (m - 1) / 2
        })
        .collect()
}

/// The proper scaffold of the given rank. Slots are read as mixed-radix digits,
/// most significant first; each digit picks a pair (smaller variable first)
/// among the variables not yet placed, in lexicographic order.
pub fn unrank_ptop(n: usize, rank: u64) -> PairedOrder {
    assert!(rank < ptop_count(n), "rank {rank} out of range for n = {n}");
    let radices = pair_radices(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut slots = Vec::with_capacity(n.div_ceil(2));
    let mut weight: u64 = radices.iter().product();
    let mut rest = rank;
    for &r in &radices {
        weight /= r;
        let mut d = rest / weight;
        rest %= weight;
        let m = remaining.len();
        let mut i = 0;
        while d >= (m - 1 - i) as u64 {
            d -= (m - 1 - i) as u64;
            i += 1;
        }
        let j = i + 1 + d as usize;
        let (a, b) = (remaining[i], remaining[j]);
        remaining.remove(j);
        remaining.remove(i);
        slots.push(Slot::Pair(a, b));
    }
    if let Some(&last) = remaining.first() {
        slots.push(Slot::Single(last));
    }
    PairedOrder::new(slots).expect("unranked scaffold is well formed")
}

/// Streams proper scaffolds by rank.
#[derive(Clone, Debug)]
pub struct PtopIter {
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for PtopIter {
    type Item = PairedOrder;

    fn next(&mut self) -> Option<PairedOrder> {
        if self.next >= self.end {
            return None;
        }
        let p = unrank_ptop(self.n, self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PtopIter {}

/// Every proper scaffold on `n >= 1` variables, each exactly once.
pub fn enumerate_ptops(n: usize) -> PtopIter {
    PtopIter { n, next: 0, end: ptop_count(n) }
}

/// The proper scaffolds whose ranks fall in `ranks`.
pub fn ptops_in_range(n: usize, ranks: Range<u64>) -> PtopIter {
    let end = ranks.end.min(ptop_count(n));
    PtopIter { n, next: ranks.start.min(end), end }
}

/// The permutation of `0..n` with the given lexicographic rank.
pub fn unrank_permutation(n: usize, rank: u64) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    let mut rest = rank;
    for k in (0..n).rev() {
        let f = factorial(k);
        let d = (rest / f) as usize;
        rest %= f;
        out.push(remaining.remove(d));
    }
    out
}

/// Streams total orders in lexicographic permutation order over a rank range.
#[derive(Clone, Debug)]
pub struct PermutationIter {
    current: Vec<usize>,
    left: u64,
}

impl Iterator for PermutationIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        let out = self.current.clone();
        if self.left > 0 {
            next_permutation(&mut self.current);
        }
        Some(out)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn permutations_in_range(n: usize, ranks: Range<u64>) -> PermutationIter {
    let end = ranks.end.min(factorial(n));
    let start = ranks.start.min(end);
    PermutationIter { current: unrank_permutation(n, start.min(factorial(n).saturating_sub(1))), left: end - start }
}

/// Lazily yields every linear extension of a realizable atomic network.
/// Variables related by `=` may appear in either order.
pub struct LinearExtensions {
    n: usize,
    preds: Vec<Vec<usize>>,
    placed: Vec<bool>,
    order: Vec<usize>,
    cursor: Vec<usize>,
    done: bool,
}

impl LinearExtensions {
    fn ready(&self, v: usize) -> bool {
        !self.placed[v] && self.preds[v].iter().all(|&u| self.placed[u])
    }

    fn pop(&mut self) {
        if let Some(v) = self.order.pop() {
            self.placed[v] = false;
        }
    }
}

impl Iterator for LinearExtensions {
    type Item = PairedOrder;

    fn next(&mut self) -> Option<PairedOrder> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(PairedOrder::from_permutation(&[]).unwrap());
        }
        loop {
            let d = self.order.len();
            if d == self.n {
                let out = PairedOrder::from_permutation(&self.order).unwrap();
                self.pop();
                return Some(out);
            }
            match (self.cursor[d]..self.n).find(|&v| self.ready(v)) {
                Some(v) => {
                    self.cursor[d] = v + 1;
                    self.placed[v] = true;
                    self.order.push(v);
                    if d + 1 < self.n {
                        self.cursor[d + 1] = 0;
                    }
                }
                None => {
                    self.cursor[d] = 0;
                    if d == 0 {
                        self.done = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}

/// Linear extensions of the strict order of a realizable atomic network.
pub fn topological_sorts(a: &Network) -> Result<LinearExtensions> {
    if !crate::network::realizable(a) {
        return Err(PotError::Contract("topological sort of an unrealizable network".into()));
    }
    let n = a.n();
    let preds = (0..n)
        .map(|v| (0..n).filter(|&u| u != v && a.get(u, v) == RelSet::LT).collect())
        .collect();
    Ok(LinearExtensions {
        n,
        preds,
        placed: vec![false; n],
        order: Vec::with_capacity(n),
        cursor: vec![0; n],
        done: false,
    })
}
