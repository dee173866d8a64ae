//! Instances, multi relational networks and models.
//!
//! A [`Network`] stores one [`RelSet`] per ordered pair of distinct variables
//! and keeps `rel(j, i) == rel(i, j).converse()` at all times. It is both the
//! form in which an instance enters the solvers and their working state.

use std::fmt;

use crate::algebra::{AtomicRelation, RelSet};
use crate::error::{PotError, Result};

/// A single binary constraint `i rels j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub i: usize,
    pub j: usize,
    pub rels: RelSet,
}

impl Constraint {
    pub fn new(i: usize, j: usize, rels: RelSet) -> Constraint {
        Constraint { i, j, rels }
    }
}

/// A problem instance: `n` variables and a list of constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Instance {
    pub n: usize,
    pub constraints: Vec<Constraint>,
}

impl Instance {
    pub fn new(n: usize) -> Instance {
        Instance { n, constraints: Vec::new() }
    }

    pub fn with_constraints(n: usize, constraints: Vec<Constraint>) -> Instance {
        Instance { n, constraints }
    }

    pub fn push(&mut self, i: usize, j: usize, rels: RelSet) -> &mut Self {
        self.constraints.push(Constraint { i, j, rels });
        self
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.constraints {
            if c.i >= self.n || c.j >= self.n {
                return Err(PotError::Input(format!(
                    "constraint ({}, {}) out of range for n = {}",
                    c.i, c.j, self.n
                )));
            }
            if c.i == c.j {
                return Err(PotError::Input(format!("constraint on ({}, {}) relates a variable to itself", c.i, c.j)));
            }
        }
        Ok(())
    }

    /// True if some constraint carries the empty set.
    pub fn has_empty_constraint(&self) -> bool {
        self.constraints.iter().any(|c| c.rels.is_empty())
    }
}

/// A multi relational network over `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Network {
    n: usize,
    rel: Vec<RelSet>,
}

impl Network {
    /// Every off-diagonal pair gets the full set.
    pub fn unconstrained(n: usize) -> Network {
        let mut rel = vec![RelSet::FULL; n * n];
        for i in 0..n {
            rel[i * n + i] = RelSet::EQ;
        }
        Network { n, rel }
    }

    pub fn from_instance(ins: &Instance) -> Result<Network> {
        ins.validate()?;
        let mut net = Network::unconstrained(ins.n);
        for c in &ins.constraints {
            net.refine(c.i, c.j, c.rels);
        }
        Ok(net)
    }

    /// Builds an atomic network from per-pair relations given for `i < j`,
    /// in the order `(0,1), (0,2), ..., (1,2), ...`.
    pub fn from_upper<I: IntoIterator<Item = RelSet>>(n: usize, upper: I) -> Network {
        let mut net = Network::unconstrained(n);
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                net.set(i, j, it.next().expect("too few relation sets"));
            }
        }
        net
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> RelSet {
        self.rel[i * self.n + j]
    }

    /// Overwrites `rel(i, j)` and its converse.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: RelSet) {
        debug_assert!(i != j);
        self.rel[i * self.n + j] = s;
        self.rel[j * self.n + i] = s.converse();
    }

    /// Intersects `rel(i, j)` with `s`; returns whether the mask shrank.
    #[inline]
    pub fn refine(&mut self, i: usize, j: usize, s: RelSet) -> bool {
        let old = self.get(i, j);
        let new = old & s;
        if new != old {
            self.set(i, j, new);
            true
        } else {
            false
        }
    }

    /// Iterates over unordered pairs `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn has_empty(&self) -> bool {
        self.pairs().any(|(i, j)| self.get(i, j).is_empty())
    }

    pub fn is_atomic(&self) -> bool {
        self.pairs().all(|(i, j)| self.get(i, j).len() == 1)
    }

    /// Total number of atomic relations over unordered pairs.
    pub fn mass(&self) -> usize {
        self.pairs().map(|(i, j)| self.get(i, j).len() as usize).sum()
    }

    /// The network restricted to `vars`, renumbered `0..vars.len()`.
    pub fn restrict(&self, vars: &[usize]) -> Network {
        let mut sub = Network::unconstrained(vars.len());
        for (a, &x) in vars.iter().enumerate() {
            for (b, &y) in vars.iter().enumerate().skip(a + 1) {
                sub.set(a, b, self.get(x, y));
            }
        }
        sub
    }

    pub fn is_coherent(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == RelSet::EQ)
            && self.pairs().all(|(i, j)| self.get(j, i) == self.get(i, j).converse())
    }

    /// `self ≼ other`: every mask of `self` is a subset of the matching mask.
    pub fn preceq(&self, other: &Network) -> Result<bool> {
        if self.n != other.n {
            return Err(PotError::Input(format!("size mismatch: {} vs {}", self.n, other.n)));
        }
        Ok(self.pairs().all(|(i, j)| self.get(i, j).is_subset(other.get(i, j))))
    }

    /// Whether `self` satisfies every constraint of `ins`.
    pub fn refines_instance(&self, ins: &Instance) -> bool {
        ins.n == self.n && ins.constraints.iter().all(|c| self.get(c.i, c.j).is_subset(c.rels))
    }
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Network(n={}", self.n)?;
        for (i, j) in self.pairs() {
            let s = self.get(i, j);
            if s != RelSet::FULL {
                write!(f, ", {i}{s:?}{j}")?;
            }
        }
        write!(f, ")")
    }
}

/// `f` is ||-larger than `g`: every pair of `f` is at least as incomparable
/// as in `g`, and the two differ somewhere.
pub fn parallel_larger(f: &Network, g: &Network) -> Result<bool> {
    if f.n != g.n {
        return Err(PotError::Input(format!("size mismatch: {} vs {}", f.n, g.n)));
    }
    if !f.is_atomic() || !g.is_atomic() {
        return Err(PotError::Input("||-larger is only defined on atomic networks".into()));
    }
    let mut differs = false;
    for i in 0..f.n {
        for j in 0..f.n {
            if i == j {
                continue;
            }
            let (fs, gs) = (f.get(i, j), g.get(i, j));
            let ok = match gs.as_atomic() {
                Some(AtomicRelation::Inc) => fs == RelSet::INC,
                Some(AtomicRelation::Lt) => fs == RelSet::LT || fs == RelSet::INC,
                Some(AtomicRelation::Gt) => fs == RelSet::GT || fs == RelSet::INC,
                _ => true,
            };
            if !ok {
                return Ok(false);
            }
            differs |= fs != gs;
        }
    }
    Ok(differs)
}

/// Equality classes and the strict order between them, for an atomic network
/// that passes every realizability check.
struct Layout {
    class_of: Vec<usize>,
    /// `lt[c * k + d]` iff class `c` lies strictly below class `d`.
    lt: Vec<bool>,
    k: usize,
}

#[allow(clippy::needless_range_loop)]
fn layout(a: &Network) -> Option<Layout> {
    let n = a.n();
    if !a.is_atomic() {
        return None;
    }
    // Classes by first occurrence; `=` must be an equivalence relation.
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        class_of[i] = c;
        for j in i + 1..n {
            if a.get(i, j) == RelSet::EQ {
                if class_of[j] != usize::MAX {
                    return None;
                }
                class_of[j] = c;
            }
        }
    }
    for (i, j) in a.pairs() {
        let same = class_of[i] == class_of[j];
        if same != (a.get(i, j) == RelSet::EQ) {
            return None;
        }
        // Congruence: every member relates to others as its representative does.
        if !same && a.get(i, j) != a.get(reps[class_of[i]], reps[class_of[j]]) {
            return None;
        }
    }
    let k = reps.len();
    let mut lt = vec![false; k * k];
    for c in 0..k {
        for d in 0..k {
            if c != d && a.get(reps[c], reps[d]) == RelSet::LT {
                lt[c * k + d] = true;
            }
        }
    }
    // Transitivity: every two-step path must already be a stated `<`.
    for c in 0..k {
        for d in 0..k {
            if !lt[c * k + d] {
                continue;
            }
            for e in 0..k {
                if lt[d * k + e] && !lt[c * k + e] {
                    return None;
                }
            }
        }
    }
    Some(Layout { class_of, lt, k })
}

/// Whether some partial order, with variables possibly mapped to the same
/// point, induces exactly the relations of the atomic network `a`.
/// Non-atomic networks are never realizable.
pub fn realizable(a: &Network) -> bool {
    layout(a).is_some()
}

/// A witness: equivalence classes of variables plus a strict order on
/// classes, given by the transitive reduction of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub class_of: Vec<usize>,
    pub strict_edges: Vec<(usize, usize)>,
}

impl Model {
    pub fn num_classes(&self) -> usize {
        self.class_of.iter().map(|c| c + 1).max().unwrap_or(0)
    }
}

/// Reads a model off a realizable atomic network.
pub fn extract_model(a: &Network) -> Result<Model> {
    let lay = layout(a).ok_or_else(|| PotError::Contract("network is not a realizable atomic network".into()))?;
    let k = lay.k;
    let mut strict_edges = Vec::new();
    for c in 0..k {
        for d in 0..k {
            if lay.lt[c * k + d] && !(0..k).any(|e| lay.lt[c * k + e] && lay.lt[e * k + d]) {
                strict_edges.push((c, d));
            }
        }
    }
    Ok(Model { class_of: lay.class_of, strict_edges })
}

/// The relation a model induces between every pair of variables, as an atomic
/// network. Fails on dangling class ids or cyclic edges.
pub fn model_network(m: &Model) -> Result<Network> {
    let n = m.class_of.len();
    let k = m.num_classes();
    let mut reach = vec![false; k * k];
    for &(c, d) in &m.strict_edges {
        if c >= k || d >= k {
            return Err(PotError::Input(format!("edge ({c}, {d}) names a class outside 0..{k}")));
        }
        reach[c * k + d] = true;
    }
    for mid in 0..k {
        for c in 0..k {
            if reach[c * k + mid] {
                for d in 0..k {
                    if reach[mid * k + d] {
                        reach[c * k + d] = true;
                    }
                }
            }
        }
    }
    if (0..k).any(|c| reach[c * k + c]) {
        return Err(PotError::Input("strict edges contain a cycle".into()));
    }
    let mut net = Network::unconstrained(n);
    for i in 0..n {
        for j in i + 1..n {
            let (c, d) = (m.class_of[i], m.class_of[j]);
            let r = if c == d {
                RelSet::EQ
            } else if reach[c * k + d] {
                RelSet::LT
            } else if reach[d * k + c] {
                RelSet::GT
            } else {
                RelSet::INC
            };
            net.set(i, j, r);
        }
    }
    Ok(net)
}

/// Checks a model against an instance using only the model's own closure.
pub fn verify_model(ins: &Instance, m: &Model) -> Result<bool> {
    if m.class_of.len() != ins.n {
        return Err(PotError::Input(format!(
            "model covers {} variables, instance has {}",
            m.class_of.len(),
            ins.n
        )));
    }
    ins.validate()?;
    let induced = model_network(m)?;
    Ok(ins
        .constraints
        .iter()
        .all(|c| induced.get(c.i, c.j).is_subset(c.rels)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::oracle;

    fn rs(s: &str) -> RelSet {
        s.parse().unwrap()
    }

    pub(crate) fn three_tasks() -> Instance {
        let mut ins = Instance::new(3);
        ins.push(0, 2, rs("<")).push(0, 1, rs("|")).push(1, 2, rs("<>"));
        ins
    }

    #[test]
    fn from_instance_three_tasks() {
        let net = Network::from_instance(&three_tasks()).unwrap();
        assert_eq!(net.get(0, 2), rs("<"));
        assert_eq!(net.get(2, 0), rs(">"));
        assert_eq!(net.get(0, 1), rs("|"));
        assert_eq!(net.get(1, 2), rs("<>"));
        assert!(net.is_coherent());
    }

    #[test]
    fn from_instance_unconstrained_and_duplicates() {
        let net = Network::from_instance(&Instance::new(3)).unwrap();
        assert!(net.pairs().all(|(i, j)| net.get(i, j) == RelSet::FULL));

        let mut ins = Instance::new(2);
        ins.push(0, 1, rs("<=")).push(1, 0, rs(">|"));
        assert_eq!(Network::from_instance(&ins).unwrap().get(0, 1), rs("<"));
    }

    #[test]
    fn from_instance_rejects_bad_indices() {
        let mut ins = Instance::new(2);
        ins.push(0, 2, rs("<"));
        assert!(matches!(Network::from_instance(&ins), Err(PotError::Input(_))));
        let mut ins = Instance::new(2);
        ins.push(1, 1, rs("<"));
        assert!(matches!(Network::from_instance(&ins), Err(PotError::Input(_))));
    }

    #[test]
    fn refine_cases() {
        let mut net = Network::unconstrained(2);
        net.set(0, 1, rs("<>"));
        assert!(net.refine(0, 1, rs("<=|")));
        assert_eq!(net.get(0, 1), rs("<"));
        assert!(!net.refine(0, 1, rs("<")));
        net.set(0, 1, rs(">"));
        assert!(net.refine(0, 1, rs("<=|")));
        assert!(net.get(0, 1).is_empty());
        assert!(net.get(1, 0).is_empty());
        assert!(net.is_coherent());
    }

    #[test]
    fn preceq_cases() {
        let f = Network::from_instance(&three_tasks()).unwrap();
        assert!(f.preceq(&f).unwrap());
        let mut g = f.clone();
        g.set(0, 2, rs("<>"));
        assert!(f.preceq(&g).unwrap());
        assert!(!g.preceq(&f).unwrap());
        let mut h = f.clone();
        h.set(0, 2, rs(">"));
        assert!(!f.preceq(&h).unwrap());
        assert!(f.preceq(&Network::unconstrained(4)).is_err());
    }

    #[test]
    fn parallel_larger_cases() {
        let g = Network::from_upper(3, [rs("<"), rs("<"), rs("<")]);
        let f = Network::from_upper(3, [rs("|"), rs("<"), rs("<")]);
        assert!(parallel_larger(&f, &g).unwrap());
        assert!(!parallel_larger(&g, &g).unwrap());
        assert!(!parallel_larger(&g, &f).unwrap());
        assert!(parallel_larger(&f, &Network::unconstrained(3)).is_err());
    }

    #[test]
    fn realizable_examples() {
        // T1 < T3, T2 < T3, T1 || T2 with pairs (0,1), (0,2), (1,2).
        assert!(realizable(&Network::from_upper(3, [rs("|"), rs("<"), rs("<")])));
        // x < y, y < z, x || z.
        assert!(!realizable(&Network::from_upper(3, [rs("<"), rs("|"), rs("<")])));
        assert!(realizable(&Network::from_upper(3, [rs("="), rs("="), rs("=")])));
        assert!(!realizable(&Network::from_upper(3, [rs("="), rs("="), rs("<")])));
        assert!(!realizable(&Network::unconstrained(3)));
    }

    #[test]
    fn realizable_matches_embedding_oracle() {
        for n in 1..=4 {
            let truth = oracle::realizable_atomic_networks(n);
            let pairs = n * (n - 1) / 2;
            let mut count = 0;
            for code in 0..(1usize << (2 * pairs)) {
                let net = Network::from_upper(
                    n,
                    (0..pairs).map(|p| RelSet::single(AtomicRelation::from_index(code >> (2 * p)))),
                );
                let expected = truth.contains(&net);
                assert_eq!(realizable(&net), expected, "{net:?}");
                count += expected as usize;
            }
            assert_eq!(count, truth.len());
        }
    }

    #[test]
    fn extract_model_examples() {
        let solution = Network::from_upper(3, [rs("|"), rs("<"), rs("<")]);
        let m = extract_model(&solution).unwrap();
        assert_eq!(m.num_classes(), 3);
        assert_eq!(m.strict_edges, vec![(0, 2), (1, 2)]);
        assert!(verify_model(&three_tasks(), &m).unwrap());

        let eq = Network::from_upper(3, [RelSet::EQ; 3]);
        let m = extract_model(&eq).unwrap();
        assert_eq!(m.num_classes(), 1);
        assert!(m.strict_edges.is_empty());

        let anti = Network::from_upper(4, [RelSet::INC; 6]);
        let m = extract_model(&anti).unwrap();
        assert_eq!(m.num_classes(), 4);
        assert!(m.strict_edges.is_empty());

        let bad = Network::from_upper(3, [rs("<"), rs("|"), rs("<")]);
        assert!(matches!(extract_model(&bad), Err(PotError::Contract(_))));
    }

    #[test]
    fn extract_model_uses_transitive_reduction() {
        let chain = Network::from_upper(3, [rs("<"), rs("<"), rs("<")]);
        let m = extract_model(&chain).unwrap();
        assert_eq!(m.strict_edges, vec![(0, 1), (1, 2)]);
        assert_eq!(model_network(&m).unwrap(), chain);
    }

    #[test]
    fn verify_model_cases() {
        let good = Model { class_of: vec![0, 1, 2], strict_edges: vec![(0, 2), (1, 2)] };
        assert!(verify_model(&three_tasks(), &good).unwrap());
        let merged = Model { class_of: vec![0, 0, 0], strict_edges: vec![] };
        assert!(!verify_model(&three_tasks(), &merged).unwrap());
        assert!(verify_model(&Instance::new(3), &merged).unwrap());
        let dangling = Model { class_of: vec![0, 1, 2], strict_edges: vec![(0, 7)] };
        assert!(verify_model(&three_tasks(), &dangling).is_err());
        let cyclic = Model { class_of: vec![0, 1, 2], strict_edges: vec![(0, 1), (1, 0)] };
        assert!(verify_model(&three_tasks(), &cyclic).is_err());
    }

    #[test]
    fn extracted_models_verify_against_refined_instances() {
        // Every realizable atomic 4-network verifies against every instance it
        // refines; here: the instance made of its own relations widened by one atomic.
        for net in oracle::realizable_atomic_networks(4) {
            let m = extract_model(&net).unwrap();
            assert_eq!(model_network(&m).unwrap(), net);
            let mut ins = Instance::new(4);
            for (i, j) in net.pairs() {
                ins.push(i, j, net.get(i, j) | RelSet::INC);
            }
            assert!(verify_model(&ins, &m).unwrap());
        }
    }
}
