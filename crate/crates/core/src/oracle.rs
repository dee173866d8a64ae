//! Slow reference procedures that share no code path with the solvers.
//!
//! They build atomic networks by embedding variables into explicitly
//! enumerated partial orders, so they are only practical for a handful of
//! variables. The test suites compare the fast implementations against them.

use std::collections::HashSet;

use crate::algebra::RelSet;
use crate::error::{PotError, Result};
use crate::network::Network;

/// Every strict partial order on `m` points, as adjacency matrices
/// (`lt[a * m + b]` iff `a < b`).
pub fn strict_partial_orders(m: usize) -> Vec<Vec<bool>> {
    let cells: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for code in 0u64..(1u64 << cells.len()) {
        let mut lt = vec![false; m * m];
        for (bit, &(a, b)) in cells.iter().enumerate() {
            lt[a * m + b] = code >> bit & 1 == 1;
        }
        let asymmetric = (0..m).all(|a| (0..m).all(|b| !(lt[a * m + b] && lt[b * m + a])));
        let transitive = (0..m).all(|a| {
            (0..m).all(|b| !lt[a * m + b] || (0..m).all(|c| !lt[b * m + c] || lt[a * m + c]))
        });
        if asymmetric && transitive {
            out.push(lt);
        }
    }
    out
}

/// All atomic networks on `n` variables induced by some map of the variables
/// into some partial order with at most `n` points.
pub fn realizable_atomic_networks(n: usize) -> HashSet<Network> {
    let mut out = HashSet::new();
    for m in 1..=n.max(1) {
        for lt in strict_partial_orders(m) {
            let mut map = vec![0usize; n];
            loop {
                let mut net = Network::unconstrained(n);
                for i in 0..n {
                    for j in i + 1..n {
                        let (a, b) = (map[i], map[j]);
                        let r = if a == b {
                            RelSet::EQ
                        } else if lt[a * m + b] {
                            RelSet::LT
                        } else if lt[b * m + a] {
                            RelSet::GT
                        } else {
                            RelSet::INC
                        };
                        net.set(i, j, r);
                    }
                }
                out.insert(net);
                // Next map in base m.
                let mut k = 0;
                while k < n {
                    map[k] += 1;
                    if map[k] < m {
                        break;
                    }
                    map[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }
    if n == 0 {
        out.insert(Network::unconstrained(0));
    }
    out
}

/// Local consistency of `f` over `s` computed from the embedding oracle:
/// each inside-`s` mask becomes the union of the relations taken by realizable
/// atomic networks lying inside `f`.
pub fn local_consistency_by_embedding(f: &Network, s: &[usize], atomic: &HashSet<Network>) -> Result<Network> {
    let k = s.len();
    if atomic.iter().next().is_some_and(|a| a.n() != k) {
        return Err(PotError::Input("atomic network set has the wrong arity".into()));
    }
    let mut union = Network::from_upper(k, std::iter::repeat(RelSet::EMPTY));
    for a in atomic {
        let inside = (0..k).all(|x| (x + 1..k).all(|y| a.get(x, y).is_subset(f.get(s[x], s[y]))));
        if inside {
            for x in 0..k {
                for y in x + 1..k {
                    union.set(x, y, union.get(x, y) | a.get(x, y));
                }
            }
        }
    }
    let mut out = f.clone();
    for x in 0..k {
        for y in x + 1..k {
            out.set(s[x], s[y], union.get(x, y));
        }
    }
    Ok(out)
}

/// Exhaustive satisfiability: tries every atomic network inside `f`.
/// Only sensible for `n <= 4`.
pub fn satisfiable_by_embedding(f: &Network, atomic: &HashSet<Network>) -> bool {
    atomic
        .iter()
        .any(|a| f.pairs().all(|(i, j)| a.get(i, j).is_subset(f.get(i, j))))
}
