//! Exact automorphism-group orders of small digraphs.
//!
//! The search walks a chain of point stabilizers. At each level the orbit
//! of the chosen base point is found by asking, for every candidate image,
//! whether some automorphism fixing the earlier base points realizes it;
//! `|Aut|` is the product of the orbit lengths. Candidate maps are pruned by
//! colour refinement on in- and out-neighbour colours.

use std::collections::VecDeque;

use thiserror::Error;

use crate::digraph::Digraph;
use crate::permcheck::Perm;

pub const DEFAULT_VERTEX_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("digraph has {vertices} vertices, above the search cap of {cap}")]
    CapExceeded { vertices: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutResult {
    pub aut_order: u128,
    pub generators_found: Vec<Perm>,
    pub vertices: usize,
    pub capped: bool,
}

struct Adjacency<'a> {
    d: &'a Digraph,
    inn: Vec<Vec<u32>>,
}

/// Dense renumbering of `keys` by sorted rank; the numbering depends only on
/// the key values, so isomorphic inputs get matching colours.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn refine_with(adj: &Adjacency, initial: &[u32]) -> Vec<u32> {
    let mut colors = rank(initial);
    let mut classes = colors.iter().copied().max().map_or(0, |c| c + 1);
    loop {
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..colors.len())
            .map(|v| {
                let mut outs: Vec<u32> = adj
                    .d
                    .out_neighbors(v)
                    .iter()
                    .map(|&w| colors[w as usize])
                    .collect();
                let mut ins: Vec<u32> = adj.inn[v].iter().map(|&w| colors[w as usize]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (colors[v], outs, ins)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = next.iter().copied().max().map_or(0, |c| c + 1);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

/// Coarsest refinement of `initial` that is stable under in/out colour counts.
pub fn refine_colors(d: &Digraph, initial: &[u32]) -> Vec<u32> {
    let adj = Adjacency {
        d,
        inn: d.in_neighbors(),
    };
    refine_with(&adj, initial)
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    colors
        .iter()
        .enumerate()
        .map(|(i, &c)| 2 * c + u32::from(i == v))
        .collect()
}

fn histogram(colors: &[u32]) -> Vec<u32> {
    let mut h = vec![0; colors.len()];
    for &c in colors {
        h[c as usize] += 1;
    }
    h
}

/// First colour class with more than one vertex.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let h = histogram(colors);
    (0..h.len() as u32).find(|&c| h[c as usize] > 1)
}

/// Arcs between singleton cells must correspond under the induced map.
fn singletons_consistent(adj: &Adjacency, a: &[u32], b: &[u32]) -> bool {
    let ha = histogram(a);
    let mut partner = vec![u32::MAX; a.len()];
    for (v, &c) in b.iter().enumerate() {
        if ha[c as usize] == 1 {
            partner[c as usize] = v as u32;
        }
    }
    for (u, &cu) in a.iter().enumerate() {
        if ha[cu as usize] != 1 {
            continue;
        }
        let pu = partner[cu as usize] as usize;
        for &w in adj.d.out_neighbors(u) {
            let cw = a[w as usize];
            if ha[cw as usize] == 1 && !adj.d.has_arc(pu, partner[cw as usize] as usize) {
                return false;
            }
        }
    }
    true
}

/// Some automorphism carrying the colouring `a` onto `b`, if one exists.
fn find_map(adj: &Adjacency, a: &[u32], b: &[u32]) -> Option<Perm> {
    if histogram(a) != histogram(b) || !singletons_consistent(adj, a, b) {
        return None;
    }
    match target_cell(a) {
        None => {
            let mut by_color = vec![0u32; b.len()];
            for (v, &c) in b.iter().enumerate() {
                by_color[c as usize] = v as u32;
            }
            let image: Vec<u32> = a.iter().map(|&c| by_color[c as usize]).collect();
            let p = Perm::from_images(image);
            adj.d
                .arcs()
                .all(|(u, v)| adj.d.has_arc(p.apply(u), p.apply(v)))
                .then_some(p)
        }
        Some(cell) => {
            let x = a.iter().position(|&c| c == cell).unwrap();
            let a2 = refine_with(adj, &individualize(a, x));
            b.iter()
                .enumerate()
                .filter(|&(_, &c)| c == cell)
                .find_map(|(y, _)| find_map(adj, &a2, &refine_with(adj, &individualize(b, y))))
        }
    }
}

fn orbit_under(gens: &[Perm], seed: usize, n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[seed] = true;
    let mut queue = VecDeque::from([seed]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn count_automorphisms(d: &Digraph, vertex_cap: usize) -> Result<AutResult, AutError> {
    let n = d.n_vertices();
    if n > vertex_cap {
        return Err(AutError::CapExceeded { vertices: n, cap: vertex_cap });
    }
    let adj = Adjacency {
        d,
        inn: d.in_neighbors(),
    };
    let mut colors = refine_with(&adj, &vec![0; n]);
    let mut order: u128 = 1;
    let mut generators_found = Vec::new();

    while let Some(cell) = target_cell(&colors) {
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
        let base = members[0];
        let fixed_base = refine_with(&adj, &individualize(&colors, base));
        // generators found at this level fix every earlier base point
        let mut level_gens: Vec<Perm> = Vec::new();
        let mut in_orbit = vec![false; n];
        in_orbit[base] = true;
        let mut rejected = vec![false; n];
        for &w in &members[1..] {
            if in_orbit[w] || rejected[w] {
                continue;
            }
            let target = refine_with(&adj, &individualize(&colors, w));
            match find_map(&adj, &fixed_base, &target) {
                Some(p) => {
                    level_gens.push(p);
                    in_orbit = orbit_under(&level_gens, base, n);
                }
                None => {
                    // everything the known subgroup maps w to is also unreachable
                    for (v, r) in orbit_under(&level_gens, w, n).into_iter().enumerate() {
                        rejected[v] |= r;
                    }
                }
            }
        }
        order *= in_orbit.iter().filter(|&&x| x).count() as u128;
        generators_found.extend(level_gens);
        colors = fixed_base;
    }

    Ok(AutResult {
        aut_order: order,
        generators_found,
        vertices: n,
        capped: false,
    })
}
