//! Arc-transitive Cayley graphs and oriented digraphs of any valency `k >= 2`
//! whose automorphism groups admit blocks of imprimitivity of any size
//! `m >= 2`, built from finite quotients of discrete Heisenberg groups and
//! certified by explicit permutation-group computation.
//!
//! * [`heisenberg`]: normal-form arithmetic in the quotients and the
//!   automorphisms `t` and `b`.
//! * [`group_ext`]: the extensions by `t` and `b`, and the connection sets.
//! * [`digraph`]: Cayley digraphs, Cartesian powers, predicates, exporters.
//! * [`permcheck`]: permutation actions and the certification checks.
//! * [`smallvalency`]: the valency-two bases.
//! * [`autsearch`]: full automorphism-group orders for small digraphs.
//! * [`cli`]: the plan / build / certify pipeline.

pub mod autsearch;
pub mod cli;
pub mod digraph;
pub mod group_ext;
pub mod heisenberg;
pub mod permcheck;
pub mod smallvalency;

pub use digraph::{Digraph, OrientationKind};
pub use group_ext::{Ext, ExtElem, GenSets};
pub use heisenberg::{make_params, Heis, HeisElem, Params, QuotientKind};
pub use permcheck::{ActionGens, BlockSystem, Flavor, Perm};
