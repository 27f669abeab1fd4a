//! Permutation actions of the constructed groups and the checks that
//! certify automorphisms, transitivity, blocks and group orders.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::digraph::Digraph;
use crate::group_ext::{Ext, ExtElem, ExtError};
use crate::heisenberg::checked_pow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutation acts on {perm} points but the digraph has {digraph} vertices")]
    SizeMismatch { perm: usize, digraph: usize },
    #[error("generator {index} ({tag:?}) is not an automorphism")]
    NotAutomorphism { index: usize, tag: GenTag },
    #[error("the action is not transitive")]
    NotTransitive,
    #[error("group order exceeds the cap of {0}")]
    CapExceeded(u64),
    #[error("{what} needs {needed} points, above the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error(transparent)]
    Ext(#[from] ExtError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    image: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            image: (0..n as u32).collect(),
        }
    }

    /// Panics unless `image` is a bijection of `0..image.len()`.
    pub fn from_images(image: Vec<u32>) -> Self {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            assert!(
                (x as usize) < image.len() && !std::mem::replace(&mut seen[x as usize], true),
                "not a permutation"
            );
        }
        Perm { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.image
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            image: self.image.iter().map(|&x| other.image[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

/// Where a generator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GenTag {
    /// Right translation `g -> g s`.
    Translation,
    /// A group automorphism fixing the identity vertex.
    Automorphism,
    /// A base generator acting in one coordinate of a Cartesian power.
    CoordinateLift { coordinate: usize, base: usize },
    /// A base automorphism acting in every coordinate at once.
    DiagonalLift { base: usize },
    CoordinateCycle,
    CoordinateSwap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionGens {
    pub n_points: usize,
    pub gens: Vec<Perm>,
    pub tags: Vec<GenTag>,
}

impl ActionGens {
    pub fn new(n_points: usize) -> Self {
        ActionGens {
            n_points,
            gens: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn push(&mut self, perm: Perm, tag: GenTag) {
        assert_eq!(perm.len(), self.n_points, "generator size mismatch");
        self.gens.push(perm);
        self.tags.push(tag);
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    pub cells: Vec<Vec<u32>>,
}

impl BlockSystem {
    /// Canonical form: each cell sorted, cells sorted by first element.
    pub fn new(mut cells: Vec<Vec<u32>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort_unstable();
        BlockSystem { cells }
    }

    pub fn cell_size(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn is_partition_of(&self, n: usize) -> bool {
        let size = self.cell_size();
        let mut seen = vec![false; n];
        for c in &self.cells {
            if c.len() != size {
                return false;
            }
            for &x in c {
                if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// `H ⋊ <b>` acting on the oriented digraph over `H`.
    L,
    /// `R ⋊ <b>` acting on the graph over `R = H ⋊ <t>`.
    G,
}

/// Right translations by the connection set plus the `b` vertex map.
pub fn action_gens(ext: &Ext, flavor: Flavor, budget: u64) -> Result<ActionGens, PermError> {
    let heis = ext.heis();
    let sets = ext.gen_sets()?;
    match flavor {
        Flavor::L => {
            let elems = heis.enumerate_elements(budget).map_err(ExtError::from)?;
            let mut ag = ActionGens::new(elems.len());
            for p in &sets.p {
                let img = elems
                    .iter()
                    .map(|g| heis.index_of(&heis.mul(g, p)) as u32)
                    .collect();
                ag.push(Perm::from_images(img), GenTag::Translation);
            }
            let img = elems
                .iter()
                .map(|g| heis.index_of(&heis.auto_b(g)) as u32)
                .collect();
            ag.push(Perm::from_images(img), GenTag::Automorphism);
            Ok(ag)
        }
        Flavor::G => {
            let elems = ext.enumerate_r(budget)?;
            let mut ag = ActionGens::new(elems.len());
            for s in &sets.s {
                let img = elems
                    .iter()
                    .map(|g| ext.index_of_r(&ext.mul(g, s)) as u32)
                    .collect();
                ag.push(Perm::from_images(img), GenTag::Translation);
            }
            let img = elems
                .iter()
                .map(|g| ext.apply_b(g).map(|x| ext.index_of_r(&x) as u32))
                .collect::<Result<_, _>>()?;
            ag.push(Perm::from_images(img), GenTag::Automorphism);
            Ok(ag)
        }
    }
}

pub fn is_automorphism(perm: &Perm, d: &Digraph) -> Result<bool, PermError> {
    if perm.len() != d.n_vertices() {
        return Err(PermError::SizeMismatch {
            perm: perm.len(),
            digraph: d.n_vertices(),
        });
    }
    // a bijection that maps arcs to arcs preserves the (finite) arc set
    Ok(d.arcs().all(|(u, v)| d.has_arc(perm.apply(u), perm.apply(v))))
}

/// Points reachable from `seed` under the generators, sorted.
pub fn orbit_points(gens: &ActionGens, seed: usize) -> Vec<u32> {
    let mut seen = vec![false; gens.n_points];
    seen[seed] = true;
    let mut queue = VecDeque::from([seed]);
    let mut out = vec![seed as u32];
    while let Some(x) = queue.pop_front() {
        for g in &gens.gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y as u32);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Arcs of `d` reachable from `seed` under the generators, sorted.
pub fn orbit_arcs(gens: &ActionGens, d: &Digraph, seed: (usize, usize)) -> Vec<(usize, usize)> {
    let mut seen = vec![false; d.n_arcs()];
    let mut out = vec![seed];
    if let Some(i) = d.arc_index(seed.0, seed.1) {
        seen[i] = true;
    }
    let mut queue = VecDeque::from([seed]);
    while let Some((u, v)) = queue.pop_front() {
        for g in &gens.gens {
            let img = (g.apply(u), g.apply(v));
            match d.arc_index(img.0, img.1) {
                Some(i) if !seen[i] => {
                    seen[i] = true;
                    out.push(img);
                    queue.push_back(img);
                }
                Some(_) => {}
                // only reachable when a generator is not an automorphism
                None => {
                    if !out.contains(&img) {
                        out.push(img);
                        queue.push_back(img);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transitivity {
    pub vertex_transitive: bool,
    pub arc_transitive: bool,
}

pub fn check_transitive(gens: &ActionGens, d: &Digraph) -> Result<Transitivity, PermError> {
    for (index, g) in gens.gens.iter().enumerate() {
        if !is_automorphism(g, d)? {
            return Err(PermError::NotAutomorphism {
                index,
                tag: gens.tags[index],
            });
        }
    }
    let vertex_transitive =
        d.n_vertices() == 0 || orbit_points(gens, 0).len() == d.n_vertices();
    let arc_transitive = match d.arcs().next() {
        None => true,
        Some(first) => orbit_arcs(gens, d, first).len() == d.n_arcs(),
    };
    Ok(Transitivity {
        vertex_transitive,
        arc_transitive,
    })
}

/// Cells `{g z^i}` over the vertex set of the given flavor.
pub fn z_block_partition(ext: &Ext, flavor: Flavor) -> BlockSystem {
    let heis = ext.heis();
    let m = heis.params().m as usize;
    let z_powers: Vec<_> = (0..m as i64).map(|i| heis.power(&heis.z(), i)).collect();
    let halves = match flavor {
        Flavor::L => 1,
        Flavor::G => 2,
    };
    let order = heis.params().order() as usize;
    let mut seen = vec![false; halves * order];
    let mut cells = Vec::new();
    for eps in 0..halves as u8 {
        for idx in 0..order {
            let g = ExtElem {
                h: heis.from_index(idx),
                eps,
                j: 0,
            };
            if seen[ext.index_of_r(&g)] {
                continue;
            }
            let cell: Vec<u32> = z_powers
                .iter()
                .map(|zi| {
                    let v = ext.index_of_r(&ext.mul(&g, &ExtElem::from_heis(zi.clone())));
                    seen[v] = true;
                    v as u32
                })
                .collect();
            cells.push(cell);
        }
    }
    BlockSystem::new(cells)
}

/// Images of `cell` under the generated group, or `None` as soon as two
/// images overlap without being equal.
pub fn block_orbit(gens: &ActionGens, cell: &[u32]) -> Option<Vec<Vec<u32>>> {
    let mut start = cell.to_vec();
    start.sort_unstable();
    start.dedup();
    let mut owner: Vec<u32> = vec![u32::MAX; gens.n_points];
    let mut images: Vec<Vec<u32>> = Vec::new();
    let mut queue = VecDeque::new();

    let mut admit = |img: Vec<u32>, images: &mut Vec<Vec<u32>>| -> Option<Option<usize>> {
        let o = owner[img[0] as usize];
        if o != u32::MAX {
            return if images[o as usize] == img {
                Some(None)
            } else {
                None
            };
        }
        let id = images.len() as u32;
        for &x in &img {
            if owner[x as usize] != u32::MAX {
                return None;
            }
            owner[x as usize] = id;
        }
        images.push(img);
        Some(Some(id as usize))
    };

    admit(start, &mut images)?;
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        for g in &gens.gens {
            let mut img: Vec<u32> = images[i].iter().map(|&x| g.apply(x as usize) as u32).collect();
            img.sort_unstable();
            if let Some(new) = admit(img, &mut images)? {
                queue.push_back(new);
            }
        }
    }
    Some(images)
}

/// Whether `cell` is a block for the group generated by `gens`.
pub fn check_block(gens: &ActionGens, cell: &[u32]) -> bool {
    let Some(images) = block_orbit(gens, cell) else {
        return false;
    };
    let covered: usize = images.iter().map(Vec::len).sum();
    let transitive = orbit_points(gens, cell[0] as usize).len() == gens.n_points;
    !transitive || covered == gens.n_points
}

/// Smallest block containing `u` and `w` in a transitive action, via
/// union-find over the generated equivalence relation.
pub fn min_block(gens: &ActionGens, u: usize, w: usize) -> Result<Vec<u32>, PermError> {
    if orbit_points(gens, u).len() != gens.n_points {
        return Err(PermError::NotTransitive);
    }
    let mut parent: Vec<usize> = (0..gens.n_points).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut queue = VecDeque::new();
    if u != w {
        parent[w] = u;
        queue.push_back((u, w));
    }
    while let Some((a, b)) = queue.pop_front() {
        for g in &gens.gens {
            let c = find(&mut parent, g.apply(a));
            let d = find(&mut parent, g.apply(b));
            if c != d {
                parent[d] = c;
                queue.push_back((c, d));
            }
        }
    }
    let root = find(&mut parent, u);
    Ok((0..gens.n_points)
        .filter(|&x| find(&mut parent, x) == root)
        .map(|x| x as u32)
        .collect())
}

/// Order of the generated group by breadth-first closure.
pub fn closure_order(gens: &ActionGens, cap: u64) -> Result<u64, PermError> {
    let id = Perm::identity(gens.n_points);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens.gens {
            let q = p.then(g);
            if !seen.contains(&q) {
                if seen.len() as u64 >= cap {
                    return Err(PermError::CapExceeded(cap));
                }
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(seen.len() as u64)
}

fn power_layout(n: usize, a: u32, budget: u64) -> Result<(usize, Vec<usize>), PermError> {
    let total = checked_pow(n as u64, a).unwrap_or(u64::MAX);
    if total > budget {
        return Err(PermError::BudgetExceeded {
            what: "lifted action",
            needed: total,
            budget,
        });
    }
    let a = a as usize;
    Ok((total as usize, (0..a).map(|i| n.pow((a - 1 - i) as u32)).collect()))
}

fn coordinate_perm(total: usize, n: usize, weights: &[usize], f: impl Fn(&mut [usize])) -> Perm {
    let mut digits = vec![0; weights.len()];
    let img = (0..total)
        .map(|x| {
            for (d, &w) in digits.iter_mut().zip(weights) {
                *d = (x / w) % n;
            }
            f(&mut digits);
            digits.iter().zip(weights).map(|(d, w)| d * w).sum::<usize>() as u32
        })
        .collect();
    Perm::from_images(img)
}

fn push_coordinate_perms(ag: &mut ActionGens, total: usize, n: usize, weights: &[usize]) {
    let a = weights.len();
    if a < 2 {
        return;
    }
    ag.push(
        coordinate_perm(total, n, weights, |d| d.rotate_right(1)),
        GenTag::CoordinateCycle,
    );
    ag.push(
        coordinate_perm(total, n, weights, |d| d.swap(0, 1)),
        GenTag::CoordinateSwap,
    );
}

/// Generators of `G wr Sym(a)` in product action on lexicographic `a`-tuples.
pub fn wreath_lift(base: &ActionGens, a: u32, budget: u64) -> Result<ActionGens, PermError> {
    let n = base.n_points;
    let (total, weights) = power_layout(n, a, budget)?;
    let mut ag = ActionGens::new(total);
    for (bi, g) in base.gens.iter().enumerate() {
        for (ci, _) in weights.iter().enumerate() {
            let p = coordinate_perm(total, n, &weights, |d| d[ci] = g.apply(d[ci]));
            ag.push(
                p,
                GenTag::CoordinateLift {
                    coordinate: ci,
                    base: bi,
                },
            );
        }
    }
    push_coordinate_perms(&mut ag, total, n, &weights);
    Ok(ag)
}

/// Subgroup of the wreath product for a Cayley base `R ⋊ A`: translations
/// act coordinatewise, automorphisms act on all coordinates at once.
///
/// The diagonal of any `A`-invariant subgroup of `R` is then a block, which
/// fails for the full wreath product whenever a point stabilizer moves
/// points of its own block.
pub fn diagonal_lift(base: &ActionGens, a: u32, budget: u64) -> Result<ActionGens, PermError> {
    let n = base.n_points;
    let (total, weights) = power_layout(n, a, budget)?;
    let mut ag = ActionGens::new(total);
    for (bi, (g, tag)) in base.gens.iter().zip(&base.tags).enumerate() {
        if *tag == GenTag::Translation {
            for (ci, _) in weights.iter().enumerate() {
                let p = coordinate_perm(total, n, &weights, |d| d[ci] = g.apply(d[ci]));
                ag.push(
                    p,
                    GenTag::CoordinateLift {
                        coordinate: ci,
                        base: bi,
                    },
                );
            }
        } else {
            let p = coordinate_perm(total, n, &weights, |d| {
                for x in d.iter_mut() {
                    *x = g.apply(*x);
                }
            });
            ag.push(p, GenTag::DiagonalLift { base: bi });
        }
    }
    push_coordinate_perms(&mut ag, total, n, &weights);
    Ok(ag)
}

/// Index of the diagonal tuple `(u, ..., u)` in an `a`-fold power on `n` points.
pub fn diagonal_index(u: usize, n: usize, a: u32) -> usize {
    (0..a).fold(0, |acc, _| acc * n + u)
}

/// Block system from the set-orbit of one certified cell.
pub fn block_system_from_cell(gens: &ActionGens, cell: &[u32]) -> Option<BlockSystem> {
    block_orbit(gens, cell).map(BlockSystem::new)
}

/// Groups points by the cell that contains them.
pub fn cell_lookup(blocks: &BlockSystem, n: usize) -> Vec<usize> {
    let mut lookup = vec![usize::MAX; n];
    for (i, c) in blocks.cells.iter().enumerate() {
        for &x in c {
            lookup[x as usize] = i;
        }
    }
    lookup
}
