//! Valency-two base constructions.
//!
//! * graph: the cycle `C_2m` under its dihedral group, blocks are the two
//!   parity classes;
//! * oriented, `m >= 3`: `Cay(Z_3 x Z_m, {(1,1), (1,-1)})` with the
//!   automorphism `(a, b) -> (a, -b)`, blocks are cosets of `0 x Z_m`;
//! * oriented, `m = 2`: `Cay(Z_4 x Z_2, {(1,0), (1,1)})` with the automorphism
//!   `(a, b) -> (a, a + b)`, blocks are cosets of `0 x Z_2`.

use crate::digraph::{cayley, Digraph, DigraphError, OrientationKind};
use crate::heisenberg::HeisError;
use crate::permcheck::{ActionGens, BlockSystem, GenTag, Perm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallBuild {
    pub digraph: Digraph,
    pub gens: ActionGens,
    pub blocks: BlockSystem,
    pub kind: OrientationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmallError {
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error("valency-two builds come only as graph or oriented digraph")]
    MixedKind,
}

/// Number of vertices of the base for the given kind.
pub fn base_order(m: u64, kind: OrientationKind) -> u64 {
    match kind {
        OrientationKind::Graph => 2 * m,
        _ if m == 2 => 8,
        _ => 3 * m,
    }
}

pub fn build_k2(m: u64, kind: OrientationKind) -> Result<SmallBuild, SmallError> {
    if m < 2 {
        return Err(HeisError::VacuousM(m).into());
    }
    match kind {
        OrientationKind::Graph => Ok(cycle_build(m as usize)?),
        OrientationKind::Oriented if m == 2 => Ok(z4z2_build()?),
        OrientationKind::Oriented => Ok(z3zm_build(m as usize)?),
        OrientationKind::Mixed => Err(SmallError::MixedKind),
    }
}

fn cycle_build(m: usize) -> Result<SmallBuild, DigraphError> {
    let n = 2 * m;
    let elems: Vec<usize> = (0..n).collect();
    let digraph = cayley(&elems, &[1, n - 1], |s, g| (s + g) % n, |g| format!("({g})"))?;
    let mut gens = ActionGens::new(n);
    gens.push(
        Perm::from_images((0..n).map(|i| ((i + 1) % n) as u32).collect()),
        GenTag::Translation,
    );
    gens.push(
        Perm::from_images((0..n).map(|i| ((n - i) % n) as u32).collect()),
        GenTag::Automorphism,
    );
    let blocks = BlockSystem::new(
        (0..2)
            .map(|r| (r..n).step_by(2).map(|x| x as u32).collect())
            .collect(),
    );
    Ok(SmallBuild {
        digraph,
        gens,
        blocks,
        kind: OrientationKind::Graph,
    })
}

/// Cayley build on `Z_p x Z_q` (lexicographic vertex order) with the given
/// connection set and coordinate automorphism; blocks are cosets of `0 x Z_q`.
fn product_build(
    p: usize,
    q: usize,
    connection: &[(usize, usize)],
    auto: impl Fn((usize, usize)) -> (usize, usize),
) -> Result<SmallBuild, DigraphError> {
    let elems: Vec<(usize, usize)> = (0..p).flat_map(|a| (0..q).map(move |b| (a, b))).collect();
    let index = |(a, b): (usize, usize)| (a * q + b) as u32;
    let add = |s: &(usize, usize), g: &(usize, usize)| ((s.0 + g.0) % p, (s.1 + g.1) % q);
    let digraph = cayley(&elems, connection, add, |g| format!("({},{})", g.0, g.1))?;
    let mut gens = ActionGens::new(p * q);
    for s in connection {
        gens.push(
            Perm::from_images(elems.iter().map(|g| index(add(g, s))).collect()),
            GenTag::Translation,
        );
    }
    gens.push(
        Perm::from_images(elems.iter().map(|&g| index(auto(g))).collect()),
        GenTag::Automorphism,
    );
    let blocks = BlockSystem::new(
        (0..p)
            .map(|a| (0..q).map(|b| index((a, b))).collect())
            .collect(),
    );
    Ok(SmallBuild {
        digraph,
        gens,
        blocks,
        kind: OrientationKind::Oriented,
    })
}

fn z3zm_build(m: usize) -> Result<SmallBuild, DigraphError> {
    product_build(3, m, &[(1, 1), (1, m - 1)], |(a, b)| (a, (m - b) % m))
}

fn z4z2_build() -> Result<SmallBuild, DigraphError> {
    product_build(4, 2, &[(1, 0), (1, 1)], |(a, b)| (a, (a + b) % 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{is_strongly_connected, orientation_kind, out_valency, Valency};
    use crate::permcheck::{check_block, check_transitive, closure_order, is_automorphism};

    fn certify(b: &SmallBuild, m: usize) {
        assert_eq!(out_valency(&b.digraph), Valency::Uniform(2));
        assert_eq!(orientation_kind(&b.digraph), b.kind);
        assert!(is_strongly_connected(&b.digraph));
        for g in &b.gens.gens {
            assert!(is_automorphism(g, &b.digraph).unwrap());
        }
        let t = check_transitive(&b.gens, &b.digraph).unwrap();
        assert!(t.vertex_transitive && t.arc_transitive);
        assert!(b.blocks.is_partition_of(b.digraph.n_vertices()));
        assert_eq!(b.blocks.cell_size(), m);
        for c in &b.blocks.cells {
            assert!(check_block(&b.gens, c));
        }
    }

    #[test]
    fn hexagon() {
        let b = build_k2(3, OrientationKind::Graph).unwrap();
        assert_eq!(b.digraph.n_vertices(), 6);
        assert_eq!(b.blocks.cells, vec![vec![0, 2, 4], vec![1, 3, 5]]);
        certify(&b, 3);
        assert_eq!(closure_order(&b.gens, 100).unwrap(), 12);
    }

    #[test]
    fn oriented_bases() {
        let b = build_k2(3, OrientationKind::Oriented).unwrap();
        assert_eq!(b.digraph.n_vertices(), 9);
        assert_eq!(b.blocks.cells.len(), 3);
        certify(&b, 3);
        assert_eq!(closure_order(&b.gens, 1000).unwrap(), 18);

        let b = build_k2(2, OrientationKind::Oriented).unwrap();
        assert_eq!(b.digraph.n_vertices(), 8);
        certify(&b, 2);
        assert_eq!(closure_order(&b.gens, 1000).unwrap(), 16);
    }

    #[test]
    fn all_small_builds_certify() {
        for m in 2..=6 {
            for kind in [OrientationKind::Graph, OrientationKind::Oriented] {
                let b = build_k2(m, kind).unwrap();
                assert_eq!(b.digraph.n_vertices() as u64, base_order(m, kind));
                certify(&b, m as usize);
            }
        }
    }

    #[test]
    fn asymmetric_connection() {
        for m in 3..10usize {
            // (1,1) + (1,-1) = (2,0) is not zero in Z_3 x Z_m
            let (s1, s2) = ((1, 1), (1, m - 1));
            assert_ne!(((s1.0 + s2.0) % 3, (s1.1 + s2.1) % m), (0, 0));
            assert_ne!(((2 * s1.0) % 3, (2 * s1.1) % m), (0, 0));
        }
    }

    #[test]
    fn rejects_vacuous_m() {
        assert!(matches!(
            build_k2(1, OrientationKind::Graph),
            Err(SmallError::Heis(HeisError::VacuousM(1)))
        ));
        assert_eq!(
            build_k2(3, OrientationKind::Mixed),
            Err(SmallError::MixedKind)
        );
    }
}
