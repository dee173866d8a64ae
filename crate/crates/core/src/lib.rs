//! Exact solvers for the network consistency problem of the point algebra of
//! partially ordered time.

pub mod algebra;
pub mod consistency;
pub mod error;
pub mod format;
pub mod instancegen;
pub mod network;
pub mod oracle;
pub mod orders;
pub mod reduction;
pub mod solver;
pub mod structure;

pub use algebra::{AtomicRelation, RelSet};
pub use error::{PotError, Result};
pub use network::{Constraint, Instance, Model, Network};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/relations.md")]
    pub mod relations {}
    #[doc = include_str!("../../../book/src/networks.md")]
    pub mod networks {}
    #[doc = include_str!("../../../book/src/scaffolds.md")]
    pub mod scaffolds {}
    #[doc = include_str!("../../../book/src/consistency.md")]
    pub mod consistency {}
    #[doc = include_str!("../../../book/src/chains.md")]
    pub mod chains {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    pub mod reduction {}
    #[doc = include_str!("../../../book/src/solving.md")]
    pub mod solving {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
