//! Links and chains in a network restricted by a scaffold.
//!
//! A link is a run of undecided pair slots `(a_1, b_1) < ... < (a_k, b_k)`
//! whose a-sides and b-sides both ascend strictly while every cross pair
//! `(a_i, b_j)` may still be incomparable. If any pair of the link is oriented
//! `a < b`, then `a_1 < b_k`.
//!
//! A chain strings links together between a head `x` and a tail `y` that are
//! forced incomparable: the head sits at or below the first a-side, the last
//! b-side of each link lies strictly below the first a-side of the next, and
//! the last b-side sits at or below the tail. Unless some link has every pair
//! oriented `b < a` (the chain is broken), the path forces `x < y`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::algebra::{AtomicRelation, RelSet};
use crate::network::Network;
use crate::orders::{PairedOrder, Slot};

const LT_INC: RelSet = RelSet::from_bits(RelSet::LT.bits() | RelSet::INC.bits());
const LT_EQ: RelSet = RelSet::from_bits(RelSet::LT.bits() | RelSet::EQ.bits());
const LT_GT: RelSet = RelSet::from_bits(RelSet::LT.bits() | RelSet::GT.bits());

/// An oriented run of pair slots, ascending in scaffold position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub pairs: Vec<(usize, usize)>,
}

impl Link {
    pub fn first_a(&self) -> usize {
        self.pairs[0].0
    }

    pub fn last_b(&self) -> usize {
        self.pairs[self.pairs.len() - 1].1
    }

    pub fn reversed(&self) -> Link {
        Link { pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect() }
    }

    /// Whether every pair of `self` appears, with the same orientation, in `other`.
    pub fn is_sublink_of(&self, other: &Link) -> bool {
        self.pairs.iter().all(|p| other.pairs.contains(p))
    }

    /// Whether `other` holds some pair of `self` in the opposite orientation.
    pub fn opposes(&self, other: &Link) -> bool {
        self.pairs.iter().any(|&(a, b)| other.pairs.contains(&(b, a)))
    }
}

impl fmt::Debug for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_char(' ')?;
            }
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub head: usize,
    pub tail: usize,
    pub links: Vec<Link>,
}

impl Chain {
    /// Number of links.
    pub fn len(&self) -> usize {
        self.links.len()
    }

    /// Number of pairs, summed over the links.
    pub fn pair_count(&self) -> usize {
        self.links.iter().map(|l| l.pairs.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Variables mentioned by the chain, head and tail included.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut vars: BTreeSet<usize> = [self.head, self.tail].into();
        for l in &self.links {
            for &(a, b) in &l.pairs {
                vars.insert(a);
                vars.insert(b);
            }
        }
        vars
    }

    fn dominated_by(&self, other: &Chain) -> bool {
        self != other
            && self.head == other.head
            && self.tail == other.tail
            && self.links.len() == other.links.len()
            && self.links.iter().zip(&other.links).all(|(l, m)| l.is_sublink_of(m))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "head={} tail={} links=[", self.head, self.tail)?;
        for (k, l) in self.links.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{l:?}")?;
        }
        f.write_char(']')
    }
}

#[inline]
fn strip_eq(s: RelSet) -> RelSet {
    s.without(AtomicRelation::Eq)
}

/// Oriented undecided pairs, both orientations, ascending by slot.
fn undecided_pairs(p: &PairedOrder, g: &Network) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for slot in p.slots() {
        if let Slot::Pair(a, b) = *slot {
            if strip_eq(g.get(a, b)) == LT_GT {
                out.push((a, b));
                out.push((b, a));
            }
        }
    }
    out
}

/// Pairwise link condition for `earlier` sitting before `later` in one link.
#[inline]
fn link_compatible(g: &Network, earlier: (usize, usize), later: (usize, usize)) -> bool {
    let ((ai, bi), (aj, bj)) = (earlier, later);
    strip_eq(g.get(ai, aj)) == RelSet::LT
        && strip_eq(g.get(bi, bj)) == RelSet::LT
        && g.get(ai, bj).contains(AtomicRelation::Inc)
        && g.get(aj, bi).contains(AtomicRelation::Inc)
}

/// Same-side compatibility between pairs of two different links of a chain.
#[inline]
fn cross_compatible(g: &Network, earlier: (usize, usize), later: (usize, usize)) -> bool {
    strip_eq(g.get(earlier.0, later.0)) == LT_INC && strip_eq(g.get(earlier.1, later.1)) == LT_INC
}

/// All maximal links of `g` under scaffold `p`, in both orientations.
pub fn find_links(p: &PairedOrder, g: &Network) -> Vec<Link> {
    let cand = undecided_pairs(p, g);
    let mut all = Vec::new();
    let mut current = Vec::new();
    grow_links(p, g, &cand, 0, &mut current, &mut all);
    let mut maximal: Vec<Link> = all
        .iter()
        .filter(|l| !all.iter().any(|m| m != *l && l.is_sublink_of(m)))
        .cloned()
        .collect();
    maximal.sort();
    maximal.dedup();
    maximal
}

fn grow_links(
    p: &PairedOrder,
    g: &Network,
    cand: &[(usize, usize)],
    from: usize,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Link>,
) {
    for k in from..cand.len() {
        let o = cand[k];
        if let Some(&last) = current.last() {
            if p.position(o.0) <= p.position(last.0) {
                continue;
            }
        }
        if current.iter().all(|&e| link_compatible(g, e, o)) {
            current.push(o);
            out.push(Link { pairs: current.clone() });
            grow_links(p, g, cand, k + 1, current, out);
            current.pop();
        }
    }
}

/// All chains of `g` under scaffold `p`, leaving out chains whose links are
/// each contained in the matching link of another chain with the same head,
/// tail and length.
pub fn find_chains(p: &PairedOrder, g: &Network) -> Vec<Chain> {
    let cand = undecided_pairs(p, g);
    if cand.is_empty() {
        return Vec::new();
    }
    let n = g.n();
    let mut found = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || p.position(x) >= p.position(y) || strip_eq(g.get(x, y)) != RelSet::INC {
                continue;
            }
            let mut search = ChainSearch { p, g, cand: &cand, head: x, tail: y, links: Vec::new(), out: &mut found };
            for (k, &o) in cand.iter().enumerate() {
                if o.0 == x || g.get(x, o.0).is_subset(LT_EQ) && !g.get(x, o.0).is_empty() {
                    search.links.push(vec![o]);
                    search.extend(k);
                    search.links.pop();
                }
            }
        }
    }
    found.sort();
    found.dedup();
    let keep: Vec<bool> = found.iter().map(|c| !found.iter().any(|d| c.dominated_by(d))).collect();
    found.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}

struct ChainSearch<'a> {
    p: &'a PairedOrder,
    g: &'a Network,
    cand: &'a [(usize, usize)],
    head: usize,
    tail: usize,
    links: Vec<Vec<(usize, usize)>>,
    out: &'a mut Vec<Chain>,
}

impl ChainSearch<'_> {
    fn cross_ok(&self, o: (usize, usize), upto: usize) -> bool {
        self.links[..upto].iter().flatten().all(|&e| cross_compatible(self.g, e, o))
    }

    /// `last` is the candidate index of the most recently placed pair.
    fn extend(&mut self, last: usize) {
        let (g, p) = (self.g, self.p);
        let cur = self.links.len() - 1;
        let prev = *self.links[cur].last().unwrap();

        // Close here: tail attaches from the last b-side.
        let end = prev.1;
        let tail_mask = g.get(end, self.tail);
        if end == self.tail || tail_mask.is_subset(LT_EQ) && !tail_mask.is_empty() {
            self.out.push(Chain {
                head: self.head,
                tail: self.tail,
                links: self.links.iter().map(|l| Link { pairs: l.clone() }).collect(),
            });
        }

        for k in last + 1..self.cand.len() {
            let o = self.cand[k];
            if p.position(o.0) <= p.position(prev.0) {
                continue;
            }
            // Grow the current link.
            if self.links[cur].iter().all(|&e| link_compatible(g, e, o)) && self.cross_ok(o, cur) {
                self.links[cur].push(o);
                self.extend(k);
                self.links[cur].pop();
            }
            // Or start the next link, bridged from the last b-side.
            if strip_eq(g.get(prev.1, o.0)) == RelSet::LT && self.cross_ok(o, cur + 1) {
                self.links.push(vec![o]);
                self.extend(k);
                self.links.pop();
            }
        }
    }
}

/// Whether some link of `c` has every pair oriented `b < a` in `g`.
pub fn is_broken(c: &Chain, g: &Network) -> bool {
    c.links.iter().any(|l| l.pairs.iter().all(|&(a, b)| g.get(a, b) == RelSet::GT))
}

/// Distinct links used by the chains, in sorted order.
pub fn chain_links(chains: &[Chain]) -> Vec<Link> {
    let set: BTreeSet<Link> = chains.iter().flat_map(|c| c.links.iter().cloned()).collect();
    set.into_iter().collect()
}

/// Chain links none of whose pairs is used in the opposite orientation by
/// any chain link.
pub fn unopposed_chain_links(p: &PairedOrder, g: &Network) -> Vec<Link> {
    unopposed_in(&find_chains(p, g))
}

pub fn unopposed_in(chains: &[Chain]) -> Vec<Link> {
    let links = chain_links(chains);
    links.iter().filter(|l| !links.iter().any(|m| l.opposes(m))).cloned().collect()
}

/// One line per link, `L: (a,b) (c,d) ...`, then one per chain,
/// `C: head=.. tail=.. links=[..]`.
pub fn render_diagnostics(links: &[Link], chains: &[Chain]) -> String {
    let mut out = String::new();
    for l in links {
        let _ = writeln!(out, "L: {l:?}");
    }
    for c in chains {
        let _ = writeln!(out, "C: {c:?}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::compose_with;

    fn rs(s: &str) -> RelSet {
        s.parse().unwrap()
    }

    const fn a(i: usize) -> usize {
        2 * (i - 1)
    }
    const fn b(i: usize) -> usize {
        2 * (i - 1) + 1
    }

    /// The five-pair configuration with two chains meeting at pair 3.
    fn example() -> (PairedOrder, Network) {
        let p = PairedOrder::new((1..=5).map(|i| Slot::Pair(a(i), b(i))).collect()).unwrap();
        let mut f = Network::unconstrained(10);
        f.set(b(1), b(3), rs("<"));
        f.set(a(2), a(3), rs("<"));
        f.set(b(2), b(3), rs("<"));
        f.set(a(3), b(4), rs("<"));
        f.set(b(3), b(5), rs("<"));
        f.set(a(1), a(4), rs("|"));
        f.set(a(2), a(5), rs("|"));
        for i in 1..=5 {
            f.set(a(i), b(i), rs("<>"));
        }
        let g = compose_with(&p, &f).unwrap();
        (p, g)
    }

    fn link(pairs: &[(usize, usize)]) -> Link {
        Link { pairs: pairs.to_vec() }
    }

    #[test]
    fn example_chains() {
        let (p, g) = example();
        let chains = find_chains(&p, &g);
        let expected = vec![
            Chain {
                head: a(1),
                tail: a(4),
                links: vec![link(&[(a(1), b(1))]), link(&[(b(3), a(3))]), link(&[(b(4), a(4))])],
            },
            Chain {
                head: a(2),
                tail: a(5),
                links: vec![link(&[(a(2), b(2)), (a(3), b(3))]), link(&[(b(5), a(5))])],
            },
        ];
        assert_eq!(chains, expected);
        assert!(chains.iter().all(|c| c.pair_count() == 3));
        assert_eq!(chains.iter().map(Chain::len).collect::<Vec<_>>(), [3, 2]);
    }

    #[test]
    fn example_links() {
        let (p, g) = example();
        let used = chain_links(&find_chains(&p, &g));
        assert_eq!(used.len(), 5);
        let expected = [
            link(&[(a(1), b(1))]),
            link(&[(a(2), b(2)), (a(3), b(3))]),
            link(&[(b(3), a(3))]),
            link(&[(b(4), a(4))]),
            link(&[(b(5), a(5))]),
        ];
        for l in &expected {
            assert!(used.contains(l), "{l:?}");
        }
        let opposed: Vec<_> = used.iter().filter(|l| used.iter().any(|m| l.opposes(m))).collect();
        assert_eq!(opposed.len(), 2);

        // Maximal links of the literal definition: pairs 1, 4, 5 alone and the
        // run over pairs 2-3, each in both orientations.
        let maximal = find_links(&p, &g);
        assert_eq!(maximal.len(), 8);
        assert!(maximal.contains(&link(&[(b(2), a(2)), (b(3), a(3))])));
        assert!(!maximal.contains(&link(&[(b(3), a(3))])));
    }

    #[test]
    fn example_unopposed() {
        let (p, g) = example();
        let free = unopposed_chain_links(&p, &g);
        assert!(free.contains(&link(&[(a(1), b(1))])));
        assert!(!free.contains(&link(&[(b(3), a(3))])));
        assert!(!free.contains(&link(&[(a(2), b(2)), (a(3), b(3))])));
        assert_eq!(free.len(), 3);
    }

    #[test]
    fn no_ambiguous_pairs_no_links() {
        let p = PairedOrder::new(vec![Slot::Pair(0, 1), Slot::Pair(2, 3)]).unwrap();
        let mut f = Network::unconstrained(4);
        f.set(0, 1, rs("<|"));
        f.set(2, 3, rs("="));
        let g = compose_with(&p, &f).unwrap();
        assert!(find_links(&p, &g).is_empty());
        assert!(find_chains(&p, &g).is_empty());
        assert!(unopposed_chain_links(&p, &g).is_empty());
    }

    #[test]
    fn single_pair_gives_two_links() {
        let p = PairedOrder::new(vec![Slot::Pair(0, 1)]).unwrap();
        let mut f = Network::unconstrained(2);
        f.set(0, 1, rs("<>"));
        let links = find_links(&p, &f);
        assert_eq!(links, vec![link(&[(0, 1)]), link(&[(1, 0)])]);
    }

    /// x < u, v < y, {u, v} paired, x || y: a chain of length one.
    fn length_one() -> (PairedOrder, Network) {
        let (x, u, v, y) = (0, 1, 2, 3);
        let p = PairedOrder::new(vec![Slot::Single(x), Slot::Pair(u, v), Slot::Single(y)]).unwrap();
        let mut f = Network::unconstrained(4);
        f.set(x, u, rs("<"));
        f.set(v, y, rs("<"));
        f.set(u, v, rs("<>"));
        f.set(x, y, rs("|"));
        (p.clone(), compose_with(&p, &f).unwrap())
    }

    #[test]
    fn chain_of_length_one() {
        let (p, g) = length_one();
        let chains = find_chains(&p, &g);
        assert_eq!(chains, vec![Chain { head: 0, tail: 3, links: vec![link(&[(1, 2)])] }]);
        assert!(!is_broken(&chains[0], &g));
    }

    #[test]
    fn broken_chains() {
        let (p, g) = length_one();
        let c = find_chains(&p, &g).remove(0);
        let mut h = g.clone();
        h.set(2, 1, rs("<"));
        assert!(is_broken(&c, &h));

        // Two-pair link with one pair decided, one open.
        let two = Chain { head: 0, tail: 5, links: vec![link(&[(1, 2), (3, 4)])] };
        let mut h = Network::unconstrained(6);
        h.set(1, 2, rs(">"));
        h.set(3, 4, rs("<>"));
        assert!(!is_broken(&two, &h));
        h.set(3, 4, rs(">"));
        assert!(is_broken(&two, &h));
    }

    #[test]
    fn diagnostics_format() {
        let (p, g) = length_one();
        let text = render_diagnostics(&find_links(&p, &g), &find_chains(&p, &g));
        assert_eq!(text, "L: (1,2)\nL: (2,1)\nC: head=0 tail=3 links=[(1,2)]\n");
    }
}
