//! The four atomic point relations of partially ordered time, sets of them,
//! converse and composition.
//!
//! A [`RelSet`] is stored as a 4-bit mask. Composition uses a hard-coded
//! table; [`derive_composition_table`] rebuilds the same table from scratch by
//! enumerating every atomic network on three points, and the test suite keeps
//! the two in lock-step.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};
use std::str::FromStr;

use crate::error::PotError;

/// One of the four basic relations between two time points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomicRelation {
    /// `<`, strictly before.
    Lt,
    /// `>`, strictly after.
    Gt,
    /// `||`, incomparable.
    Inc,
    /// `=`, the same point.
    Eq,
}

impl AtomicRelation {
    pub const ALL: [AtomicRelation; 4] = [Self::Lt, Self::Gt, Self::Inc, Self::Eq];

    #[inline]
    pub const fn bit(self) -> u8 {
        match self {
            Self::Lt => 0b0001,
            Self::Gt => 0b0010,
            Self::Inc => 0b0100,
            Self::Eq => 0b1000,
        }
    }

    #[inline]
    pub const fn index(self) -> usize {
        match self {
            Self::Lt => 0,
            Self::Gt => 1,
            Self::Inc => 2,
            Self::Eq => 3,
        }
    }

    #[inline]
    pub const fn from_index(i: usize) -> AtomicRelation {
        match i & 3 {
            0 => Self::Lt,
            1 => Self::Gt,
            2 => Self::Inc,
            _ => Self::Eq,
        }
    }

    #[inline]
    pub const fn converse(self) -> AtomicRelation {
        match self {
            Self::Lt => Self::Gt,
            Self::Gt => Self::Lt,
            r => r,
        }
    }

    /// Serialization character: `<`, `>`, `|` or `=`.
    pub const fn symbol(self) -> char {
        match self {
            Self::Lt => '<',
            Self::Gt => '>',
            Self::Inc => '|',
            Self::Eq => '=',
        }
    }

    pub fn from_symbol(c: char) -> Option<AtomicRelation> {
        match c {
            '<' => Some(Self::Lt),
            '>' => Some(Self::Gt),
            '|' => Some(Self::Inc),
            '=' => Some(Self::Eq),
            _ => None,
        }
    }
}

impl fmt::Display for AtomicRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Inc => f.write_str("||"),
            r => write!(f, "{}", r.symbol()),
        }
    }
}

/// A set of atomic relations. The empty set marks a locally inconsistent
/// pair, the full set an unconstrained one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelSet(u8);

impl RelSet {
    pub const EMPTY: RelSet = RelSet(0);
    pub const FULL: RelSet = RelSet(0b1111);
    pub const LT: RelSet = RelSet(0b0001);
    pub const GT: RelSet = RelSet(0b0010);
    pub const INC: RelSet = RelSet(0b0100);
    pub const EQ: RelSet = RelSet(0b1000);

    /// Builds a set from its raw 4-bit mask; higher bits are dropped.
    #[inline]
    pub const fn from_bits(bits: u8) -> RelSet {
        RelSet(bits & 0b1111)
    }

    #[inline]
    pub const fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn single(r: AtomicRelation) -> RelSet {
        RelSet(r.bit())
    }

    pub fn of(rels: &[AtomicRelation]) -> RelSet {
        rels.iter().fold(RelSet::EMPTY, |acc, r| acc | RelSet::single(*r))
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub const fn contains(self, r: AtomicRelation) -> bool {
        self.0 & r.bit() != 0
    }

    #[inline]
    pub const fn is_subset(self, other: RelSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// The single member, if there is exactly one.
    pub fn as_atomic(self) -> Option<AtomicRelation> {
        if self.0.count_ones() == 1 {
            Some(AtomicRelation::from_index(self.0.trailing_zeros() as usize))
        } else {
            None
        }
    }

    #[inline]
    pub const fn without(self, r: AtomicRelation) -> RelSet {
        RelSet(self.0 & !r.bit())
    }

    #[inline]
    pub const fn with(self, r: AtomicRelation) -> RelSet {
        RelSet(self.0 | r.bit())
    }

    pub fn iter(self) -> impl Iterator<Item = AtomicRelation> {
        AtomicRelation::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    /// Swaps `<` and `>`; `||` and `=` are their own converses.
    #[inline]
    pub const fn converse(self) -> RelSet {
        let lt = self.0 & 0b0001;
        let gt = self.0 & 0b0010;
        RelSet((self.0 & 0b1100) | (lt << 1) | (gt >> 1))
    }

    /// Every relation `x r z` compatible with `x r1 y` and `y r2 z` for some
    /// `r1` in `self` and `r2` in `other`.
    #[inline]
    pub fn compose(self, other: RelSet) -> RelSet {
        COMPOSE_SETS[((self.0 as usize) << 4) | other.0 as usize]
    }

    /// All 16 relation sets, ordered by mask value.
    pub fn all() -> impl Iterator<Item = RelSet> {
        (0u8..16).map(RelSet)
    }

    /// The 15 non-empty relation sets.
    pub fn non_empty() -> impl Iterator<Item = RelSet> {
        (1u8..16).map(RelSet)
    }
}

pub fn converse(s: RelSet) -> RelSet {
    s.converse()
}

pub fn compose(s1: RelSet, s2: RelSet) -> RelSet {
    s1.compose(s2)
}

impl From<AtomicRelation> for RelSet {
    fn from(r: AtomicRelation) -> RelSet {
        RelSet::single(r)
    }
}

impl BitOr for RelSet {
    type Output = RelSet;
    fn bitor(self, rhs: RelSet) -> RelSet {
        RelSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for RelSet {
    fn bitor_assign(&mut self, rhs: RelSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for RelSet {
    type Output = RelSet;
    fn bitand(self, rhs: RelSet) -> RelSet {
        RelSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for RelSet {
    fn bitand_assign(&mut self, rhs: RelSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for RelSet {
    type Output = RelSet;
    fn sub(self, rhs: RelSet) -> RelSet {
        RelSet(self.0 & !rhs.0)
    }
}

impl Not for RelSet {
    type Output = RelSet;
    fn not(self) -> RelSet {
        RelSet(!self.0 & 0b1111)
    }
}

/// Canonical text: members in the order `<`, `>`, `=`, `|`.
impl fmt::Display for RelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in [
            AtomicRelation::Lt,
            AtomicRelation::Gt,
            AtomicRelation::Eq,
            AtomicRelation::Inc,
        ] {
            if self.contains(r) {
                write!(f, "{}", r.symbol())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Parses the canonical text form, accepting the characters in any order but
/// rejecting repeats. The empty string is rejected.
impl FromStr for RelSet {
    type Err = PotError;

    fn from_str(s: &str) -> Result<RelSet, PotError> {
        let mut set = RelSet::EMPTY;
        for c in s.chars() {
            let r = AtomicRelation::from_symbol(c)
                .ok_or_else(|| PotError::Input(format!("bad relation character {c:?} in {s:?}")))?;
            if set.contains(r) {
                return Err(PotError::Input(format!("repeated relation {c:?} in {s:?}")));
            }
            set = set.with(r);
        }
        if set.is_empty() {
            return Err(PotError::Input("empty relation set".into()));
        }
        Ok(set)
    }
}

/// Atomic composition, indexed `[r1][r2]` in `AtomicRelation::index` order
/// (`<`, `>`, `||`, `=`).
pub const COMPOSITION_TABLE: [[RelSet; 4]; 4] = {
    const L: u8 = 0b0001;
    const G: u8 = 0b0010;
    const I: u8 = 0b0100;
    const E: u8 = 0b1000;
    const A: u8 = 0b1111;
    [
        [RelSet(L), RelSet(A), RelSet(L | I), RelSet(L)],
        [RelSet(A), RelSet(G), RelSet(G | I), RelSet(G)],
        [RelSet(L | I), RelSet(G | I), RelSet(A), RelSet(I)],
        [RelSet(L), RelSet(G), RelSet(I), RelSet(E)],
    ]
};

const COMPOSE_SETS: [RelSet; 256] = {
    let mut out = [RelSet(0); 256];
    let mut a = 0;
    while a < 16 {
        let mut b = 0;
        while b < 16 {
            let mut acc = 0u8;
            let mut i = 0;
            while i < 4 {
                if a & (1 << i) != 0 {
                    let mut j = 0;
                    while j < 4 {
                        if b & (1 << j) != 0 {
                            acc |= COMPOSITION_TABLE[i][j].0;
                        }
                        j += 1;
                    }
                }
                i += 1;
            }
            out[(a << 4) | b] = RelSet(acc);
            b += 1;
        }
        a += 1;
    }
    out
};

/// Rebuilds the composition table by enumerating all 4^3 atomic networks on
/// three points and keeping the realizable ones.
pub fn derive_composition_table() -> [[RelSet; 4]; 4] {
    use crate::network::{realizable, Network};

    let mut table = [[RelSet::EMPTY; 4]; 4];
    for r1 in AtomicRelation::ALL {
        for r2 in AtomicRelation::ALL {
            for r in AtomicRelation::ALL {
                let mut net = Network::unconstrained(3);
                net.set(0, 1, r1.into());
                net.set(1, 2, r2.into());
                net.set(0, 2, r.into());
                if realizable(&net) {
                    table[r1.index()][r2.index()] = table[r1.index()][r2.index()].with(r);
                }
            }
        }
    }
    table
}
