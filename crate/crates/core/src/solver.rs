//! The three decision procedures.
//!
//! * [`solve_ptop`] enumerates paired total orders, grows each into a total
//!   order with [`r_tot`] and decides the result in polynomial time.
//! * [`solve_total_orders`] does the same over all `n!` total orders.
//! * [`solve_brute`] assigns atomic relations pair by pair. It shares no code
//!   with the other two beyond the network type and is used as the oracle.
//!
//! [`solve`] dispatches and can split the rank space over worker threads.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::algebra::{AtomicRelation, RelSet};
use crate::consistency::{propagate_in_place, solve_under_total_order, TotalOrderOutcome};
use crate::error::{PotError, Result};
use crate::network::{extract_model, realizable, verify_model, Instance, Model, Network};
use crate::orders::{
    compose_in_place, factorial, permutations_in_range, ptop_count, ptops_in_range, PairedOrder, MAX_RANKED_N,
};
use crate::reduction::r_tot;

/// Largest instance [`solve_brute`] accepts.
pub const BRUTE_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ptop,
    Total,
    Brute,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ptop => "ptop",
            Algorithm::Total => "total",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = PotError;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "ptop" => Ok(Algorithm::Ptop),
            "total" => Ok(Algorithm::Total),
            "brute" => Ok(Algorithm::Brute),
            _ => Err(PotError::Input(format!("unknown algorithm {s:?} (expected ptop, total or brute)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Scaffolds tried (complete assignments for the brute-force solver).
    pub leaves: u64,
    pub greedy_steps: u64,
    pub rule_fires: u64,
    pub rule2_fires: u64,
    pub rule3_fires: u64,
    pub rule4_fires: u64,
    pub millis: u64,
    /// Total orders whose final atomic network was not realizable, plus
    /// produced models that failed verification. Expected to stay 0.
    pub verification_failures: u64,
}

impl SolveStats {
    fn absorb(&mut self, o: &SolveStats) {
        self.leaves += o.leaves;
        self.greedy_steps += o.greedy_steps;
        self.rule_fires += o.rule_fires;
        self.rule2_fires += o.rule2_fires;
        self.rule3_fires += o.rule3_fires;
        self.rule4_fires += o.rule4_fires;
        self.verification_failures += o.verification_failures;
    }

    /// `key=value` lines, one per counter.
    pub fn render(&self) -> String {
        format!(
            "leaves={}\ngreedy_steps={}\nrule_fires={}\nrule2_fires={}\nrule3_fires={}\nrule4_fires={}\nverification_failures={}\nmillis={}\n",
            self.leaves,
            self.greedy_steps,
            self.rule_fires,
            self.rule2_fires,
            self.rule3_fires,
            self.rule4_fires,
            self.verification_failures,
            self.millis
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub verdict: Verdict,
    /// Present iff the verdict is [`Verdict::Yes`].
    pub model: Option<Model>,
    pub stats: SolveStats,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    fn no(stats: SolveStats) -> Answer {
        Answer { verdict: Verdict::No, model: None, stats }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub threads: usize,
    /// Run sequentially so that the witness and all counters are reproducible.
    pub strict: bool,
    pub timeout: Option<Duration>,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions { threads: 1, strict: false, timeout: None }
    }
}

/// Cancellation and deadline, polled once per leaf.
#[derive(Clone, Copy)]
struct Ctl<'a> {
    stop: Option<&'a AtomicBool>,
    deadline: Option<Instant>,
}

impl Ctl<'_> {
    const NONE: Ctl<'static> = Ctl { stop: None, deadline: None };

    fn check(&self) -> Result<bool> {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(PotError::Timeout);
        }
        Ok(self.stop.is_some_and(|s| s.load(Ordering::Relaxed)))
    }
}

fn prepare(ins: &Instance) -> Result<Network> {
    ins.validate()?;
    if ins.n > MAX_RANKED_N {
        return Err(PotError::Resource(format!(
            "n = {} exceeds the enumeration limit of {MAX_RANKED_N}",
            ins.n
        )));
    }
    Network::from_instance(ins)
}

/// Exact search over atomic networks. Guarded to `n <= 8`.
pub fn solve_brute(ins: &Instance) -> Result<Answer> {
    solve_with(ins, Algorithm::Brute, &SolveOptions::default())
}

/// Satisfiability of a network by the brute-force search; suitable as the
/// oracle of [`crate::reduction::r_corr`].
pub fn brute_satisfiable(f: &Network) -> Result<bool> {
    Ok(Brute::new(f, Ctl::NONE)?.run()?.is_some())
}

struct Brute<'a> {
    f: &'a Network,
    order: Vec<(usize, usize)>,
    a: Network,
    leaves: u64,
    nodes: u64,
    ctl: Ctl<'a>,
}

impl<'a> Brute<'a> {
    fn new(f: &'a Network, ctl: Ctl<'a>) -> Result<Brute<'a>> {
        let n = f.n();
        if n > BRUTE_MAX_N {
            return Err(PotError::Resource(format!(
                "brute force is limited to n <= {BRUTE_MAX_N}, got n = {n}"
            )));
        }
        let order = (1..n).flat_map(|k| (0..k).map(move |i| (i, k))).collect();
        Ok(Brute { f, order, a: Network::unconstrained(n), leaves: 0, nodes: 0, ctl })
    }

    fn run(&mut self) -> Result<Option<Network>> {
        if self.f.has_empty() {
            return Ok(None);
        }
        if self.dfs(0)? {
            Ok(Some(self.a.clone()))
        } else {
            Ok(None)
        }
    }

    fn dfs(&mut self, idx: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && self.ctl.check()? {
            return Ok(false);
        }
        let Some(&(i, k)) = self.order.get(idx) else {
            self.leaves += 1;
            return Ok(realizable(&self.a));
        };
        for r in self.f.get(i, k).iter() {
            let rk = RelSet::single(r);
            // Every triple j < i < k is complete once (i, k) is set.
            let ok = (0..i).all(|j| self.a.get(j, i).compose(rk).contains(atom(self.a.get(j, k))));
            if !ok {
                continue;
            }
            self.a.set(i, k, rk);
            if self.dfs(idx + 1)? {
                return Ok(true);
            }
        }
        self.a.set(i, k, RelSet::FULL);
        Ok(false)
    }
}

fn atom(s: RelSet) -> AtomicRelation {
    s.as_atomic().expect("assigned pairs are atomic")
}

/// Enumerates all `n!` total orders and decides each in polynomial time.
pub fn solve_total_orders(ins: &Instance) -> Result<Answer> {
    solve_with(ins, Algorithm::Total, &SolveOptions { strict: true, ..SolveOptions::default() })
}

/// Enumerates all `n!/2^⌊n/2⌋` paired total orders, grows each into a total
/// order and decides it in polynomial time.
pub fn solve_ptop(ins: &Instance) -> Result<Answer> {
    solve_with(ins, Algorithm::Ptop, &SolveOptions { strict: true, ..SolveOptions::default() })
}

/// Runs `algo` on `ins`. With `threads > 1` and `strict` unset, the rank
/// space is cut into contiguous ranges, one per worker, and the first
/// verified model wins.
pub fn solve(ins: &Instance, algo: Algorithm, opts: &SolveOptions) -> Result<Answer> {
    solve_with(ins, algo, opts)
}

fn solve_with(ins: &Instance, algo: Algorithm, opts: &SolveOptions) -> Result<Answer> {
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let mut answer = match algo {
        Algorithm::Brute => {
            ins.validate()?;
            let f = Network::from_instance(ins)?;
            let mut search = Brute::new(&f, Ctl { stop: None, deadline })?;
            let found = search.run()?;
            let stats = SolveStats { leaves: search.leaves, ..SolveStats::default() };
            match found {
                Some(a) => Answer { verdict: Verdict::Yes, model: Some(extract_model(&a)?), stats },
                None => Answer::no(stats),
            }
        }
        Algorithm::Ptop | Algorithm::Total => {
            let f = prepare(ins)?;
            let n = ins.n;
            let total = if algo == Algorithm::Ptop { ptop_count(n) } else { factorial(n) };
            let threads = if opts.strict { 1 } else { opts.threads.max(1) };
            if threads == 1 || total < 2 {
                enumerate(ins, &f, algo, 0..total, Ctl { stop: None, deadline })?
            } else {
                parallel(ins, &f, algo, total, threads as u64, deadline)?
            }
        }
    };
    answer.stats.millis = start.elapsed().as_millis() as u64;
    Ok(answer)
}

fn parallel(
    ins: &Instance,
    f: &Network,
    algo: Algorithm,
    total: u64,
    threads: u64,
    deadline: Option<Instant>,
) -> Result<Answer> {
    let stop = AtomicBool::new(false);
    let found: Mutex<Option<Model>> = Mutex::new(None);
    let chunk = total.div_ceil(threads);
    let results: Vec<Result<SolveStats>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let lo = (w * chunk).min(total);
                let hi = ((w + 1) * chunk).min(total);
                let (stop, found) = (&stop, &found);
                scope.spawn(move || {
                    let ans = enumerate(ins, f, algo, lo..hi, Ctl { stop: Some(stop), deadline });
                    if let Ok(a) = &ans {
                        if let Some(m) = &a.model {
                            stop.store(true, Ordering::Relaxed);
                            found.lock().expect("poisoned").get_or_insert_with(|| m.clone());
                        }
                    }
                    ans.map(|a| a.stats)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut stats = SolveStats::default();
    let mut err = None;
    for r in results {
        match r {
            Ok(s) => stats.absorb(&s),
            Err(e) => err = err.or(Some(e)),
        }
    }
    match found.into_inner().expect("poisoned") {
        Some(model) => Ok(Answer { verdict: Verdict::Yes, model: Some(model), stats }),
        None => match err {
            Some(e) => Err(e),
            None => Ok(Answer::no(stats)),
        },
    }
}

/// Sequential scan of one rank range.
fn enumerate(ins: &Instance, f: &Network, algo: Algorithm, ranks: std::ops::Range<u64>, ctl: Ctl<'_>) -> Result<Answer> {
    let mut stats = SolveStats::default();
    let leaf = |t: &PairedOrder, net: &Network, stats: &mut SolveStats| -> Result<Option<Model>> {
        match solve_under_total_order(t, net)? {
            TotalOrderOutcome::Model(m) => {
                if verify_model(ins, &m)? {
                    Ok(Some(m))
                } else {
                    stats.verification_failures += 1;
                    Ok(None)
                }
            }
            TotalOrderOutcome::Unrealizable => {
                stats.verification_failures += 1;
                Ok(None)
            }
            TotalOrderOutcome::No => Ok(None),
        }
    };
    match algo {
        Algorithm::Ptop => {
            for p in ptops_in_range(ins.n, ranks) {
                if ctl.check()? {
                    break;
                }
                stats.leaves += 1;
                // If p∘f is already path inconsistent then so is every total
                // order below it, and r_tot cannot change the answer.
                let mut g = f.clone();
                compose_in_place(&p, &mut g);
                if propagate_in_place(&mut g).empty_pair_found {
                    continue;
                }
                let st = r_tot(&p, f);
                stats.greedy_steps += st.stats.greedy_steps;
                stats.rule_fires += st.stats.rule_fires();
                stats.rule2_fires += st.stats.rule2_fires;
                stats.rule3_fires += st.stats.rule3_fires;
                stats.rule4_fires += st.stats.rule4_fires;
                if st.net.has_empty() {
                    continue;
                }
                if let Some(m) = leaf(&st.scaffold, &st.net, &mut stats)? {
                    return Ok(Answer { verdict: Verdict::Yes, model: Some(m), stats });
                }
            }
        }
        Algorithm::Total => {
            for perm in permutations_in_range(ins.n, ranks) {
                if ctl.check()? {
                    break;
                }
                stats.leaves += 1;
                let t = PairedOrder::from_permutation(&perm)?;
                if let Some(m) = leaf(&t, f, &mut stats)? {
                    return Ok(Answer { verdict: Verdict::Yes, model: Some(m), stats });
                }
            }
        }
        Algorithm::Brute => unreachable!("brute force is not rank based"),
    }
    Ok(Answer::no(stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::tests::three_tasks;
    use crate::network::Instance;

    fn triangle() -> Instance {
        let mut ins = Instance::new(3);
        ins.push(0, 1, RelSet::LT).push(1, 2, RelSet::LT).push(2, 0, RelSet::LT);
        ins
    }

    #[test]
    fn three_tasks_all_solvers() {
        let ins = three_tasks();
        for algo in [Algorithm::Ptop, Algorithm::Total, Algorithm::Brute] {
            let a = solve(&ins, algo, &SolveOptions::default()).unwrap();
            assert!(a.is_yes(), "{algo}");
            assert!(verify_model(&ins, a.model.as_ref().unwrap()).unwrap());
        }
        assert!(solve_total_orders(&ins).unwrap().stats.leaves <= 6);
        assert!(solve_ptop(&ins).unwrap().stats.leaves <= 3);
    }

    #[test]
    fn antisymmetry_and_triangle() {
        let mut ins = Instance::new(2);
        ins.push(0, 1, RelSet::LT).push(1, 0, RelSet::LT);
        assert!(!solve_brute(&ins).unwrap().is_yes());
        let t = triangle();
        assert!(!solve_brute(&t).unwrap().is_yes());
        assert_eq!(solve_total_orders(&t).unwrap().stats.leaves, 6);
        assert_eq!(solve_ptop(&t).unwrap().stats.leaves, 3);
    }

    #[test]
    fn all_incomparable_first_order() {
        let mut ins = Instance::new(5);
        for i in 0..5 {
            for j in i + 1..5 {
                ins.push(i, j, RelSet::INC);
            }
        }
        let a = solve_total_orders(&ins).unwrap();
        assert!(a.is_yes());
        assert_eq!(a.stats.leaves, 1);
    }

    #[test]
    fn brute_guard_and_unknown_algorithm() {
        assert!(matches!(solve_brute(&Instance::new(20)), Err(PotError::Resource(_))));
        assert!(matches!(solve(&Instance::new(20), Algorithm::Brute, &SolveOptions::default()), Err(PotError::Resource(_))));
        assert!(matches!("dfs".parse::<Algorithm>(), Err(PotError::Input(_))));
    }

    #[test]
    fn exhaustive_three_variables() {
        let masks: Vec<RelSet> = RelSet::non_empty().collect();
        for &a in &masks {
            for &b in &masks {
                for &c in &masks {
                    let mut ins = Instance::new(3);
                    ins.push(0, 1, a).push(0, 2, b).push(1, 2, c);
                    let brute = solve_brute(&ins).unwrap();
                    let ptop = solve_ptop(&ins).unwrap();
                    let total = solve_total_orders(&ins).unwrap();
                    assert_eq!(brute.verdict, ptop.verdict, "{a} {b} {c}");
                    assert_eq!(brute.verdict, total.verdict, "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let t = triangle();
        let par = SolveOptions { threads: 4, ..SolveOptions::default() };
        let a = solve(&t, Algorithm::Ptop, &par).unwrap();
        assert_eq!(a.verdict, Verdict::No);
        assert_eq!(a.stats.leaves, 3);
        assert!(solve(&three_tasks(), Algorithm::Total, &par).unwrap().is_yes());
    }
}
