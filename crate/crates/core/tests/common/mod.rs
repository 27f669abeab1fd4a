//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the normal-form multiplication under test: products
//! are computed by rewriting generator words with the defining relations,
//! automorphism groups by trying every permutation, blocks by scanning
//! every subset against every group element.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use heiscay::digraph::Digraph;
use heiscay::permcheck::{ActionGens, Perm};
use heiscay::{Heis, HeisElem};

/// One letter of a word in the infinite Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    /// `x_i^sign`, 1-based index.
    X(usize, i64),
    Z(i64),
}

/// Word rewriting in the infinite group on `x_1..x_2n, z`.
pub struct WordOracle {
    pub n: usize,
    pub m: i64,
    /// `Some(v)` for the even quotient, `None` for the odd one.
    pub v: Option<Vec<i64>>,
}

impl WordOracle {
    pub fn for_heis(h: &Heis) -> Self {
        let p = h.params();
        let n = p.n as usize;
        let v = if p.m % 2 == 0 {
            // 1 from index n upward, alternating 0,1,0,... going down from n-1
            let mut v = vec![1i64; 2 * n];
            let mut bit = 0;
            for i in (0..n.saturating_sub(1)).rev() {
                v[i] = bit;
                bit = 1 - bit;
            }
            Some(v)
        } else {
            None
        };
        WordOracle {
            n,
            m: p.m as i64,
            v,
        }
    }

    pub fn word_of(&self, g: &HeisElem) -> Vec<Letter> {
        let mut w = Vec::new();
        for (i, &e) in g.a.iter().enumerate() {
            for _ in 0..e {
                w.push(Letter::X(i + 1, 1));
            }
        }
        for _ in 0..g.c {
            w.push(Letter::Z(1));
        }
        w
    }

    /// Sorts the x-letters by index with explicit swap rules, in the
    /// infinite group, then reduces modulo the kernel.
    pub fn normal_form(&self, word: &[Letter]) -> HeisElem {
        let n = self.n;
        let mut c: i64 = 0;
        let mut xs: Vec<(usize, i64)> = Vec::new();
        for &l in word {
            match l {
                Letter::Z(s) => c += s,
                Letter::X(i, s) => xs.push((i, s)),
            }
        }
        // bubble sort; swapping x_{i+n}^e x_i^f costs a power of z
        let mut swapped = true;
        while swapped {
            swapped = false;
            for p in 0..xs.len().saturating_sub(1) {
                let (j, e) = xs[p];
                let (i, f) = xs[p + 1];
                if j > i {
                    if j == i + n {
                        // y x = x y z^-1, y^-1 x = x y^-1 z,
                        // y x^-1 = x^-1 y z, y^-1 x^-1 = x^-1 y^-1 z^-1
                        c += match (e, f) {
                            (1, 1) => -1,
                            (-1, 1) => 1,
                            (1, -1) => 1,
                            (-1, -1) => -1,
                            _ => unreachable!("letters carry unit exponents"),
                        };
                    }
                    xs.swap(p, p + 1);
                    swapped = true;
                }
            }
        }
        let mut a = vec![0i64; 2 * n];
        for (i, s) in xs {
            a[i - 1] += s;
        }
        // reduce modulo the kernel
        let mut out = vec![0u32; 2 * n];
        for i in 0..2 * n {
            let q = a[i].div_euclid(self.m);
            out[i] = a[i].rem_euclid(self.m) as u32;
            if let Some(v) = &self.v {
                // x_i^(qm) = z^(-q v_i m/2)
                c -= q * v[i] * self.m / 2;
            }
        }
        HeisElem {
            a: out,
            c: c.rem_euclid(self.m) as u32,
        }
    }

    pub fn mul(&self, g: &HeisElem, h: &HeisElem) -> HeisElem {
        let mut w = self.word_of(g);
        w.extend(self.word_of(h));
        self.normal_form(&w)
    }

    fn substitute(&self, g: &HeisElem, image: impl Fn(usize) -> Vec<Letter>) -> HeisElem {
        let mut w = Vec::new();
        for (i, &e) in g.a.iter().enumerate() {
            for _ in 0..e {
                w.extend(image(i + 1));
            }
        }
        w.push(Letter::Z(g.c as i64));
        self.normal_form(&w)
    }

    pub fn auto_t(&self, g: &HeisElem) -> HeisElem {
        self.substitute(g, |i| vec![Letter::X(i, -1)])
    }

    pub fn auto_b(&self, g: &HeisElem) -> HeisElem {
        let n = self.n;
        self.substitute(g, |i| {
            if i < n {
                vec![Letter::X(i + 1, 1), Letter::X(n + 1, 1)]
            } else if i < 2 * n {
                vec![Letter::X(i + 1, 1)]
            } else {
                std::iter::once(1)
                    .chain(n + 1..=2 * n)
                    .map(|j| Letter::X(j, -1))
                    .collect()
            }
        })
    }
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn brute_force_aut_order(d: &Digraph) -> u64 {
    let arcs: HashSet<(usize, usize)> = d.arcs().collect();
    all_perms(d.n_vertices())
        .into_iter()
        .filter(|p| arcs.iter().all(|&(u, v)| arcs.contains(&(p[u], p[v]))))
        .count() as u64
}

/// Every element of the group generated by `gens`, as image vectors.
pub fn group_elements(gens: &ActionGens) -> Vec<Vec<u32>> {
    let id: Vec<u32> = (0..gens.n_points as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens.gens {
            let q: Vec<u32> = p.iter().map(|&x| g.images()[x as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// Block test by definition: every group element maps the set to itself
/// or to a disjoint set.
pub fn is_block_by_definition(elements: &[Vec<u32>], set: &[u32]) -> bool {
    let s: HashSet<u32> = set.iter().copied().collect();
    elements.iter().all(|g| {
        let img: HashSet<u32> = set.iter().map(|&x| g[x as usize]).collect();
        img == s || img.is_disjoint(&s)
    })
}

/// Smallest block containing `u` and `w`, by scanning all subsets.
pub fn brute_force_min_block(gens: &ActionGens, u: usize, w: usize) -> Vec<u32> {
    let n = gens.n_points;
    assert!(n <= 16, "subset scan is exponential");
    let elements = group_elements(gens);
    let mut best: Option<Vec<u32>> = None;
    for mask in 0u32..(1 << n) {
        if mask & (1 << u) == 0 || mask & (1 << w) == 0 {
            continue;
        }
        let set: Vec<u32> = (0..n as u32).filter(|&x| mask & (1 << x) != 0).collect();
        if best.as_ref().is_some_and(|b| b.len() <= set.len()) {
            continue;
        }
        if is_block_by_definition(&elements, &set) {
            best = Some(set);
        }
    }
    best.unwrap()
}

pub fn sym_digraph(n: usize, edges: &[(usize, usize)]) -> Digraph {
    Digraph::from_arcs(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]), None).unwrap()
}

pub fn cycle_graph(n: usize) -> Digraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    sym_digraph(n, &edges)
}

pub fn dihedral_action(n: usize) -> ActionGens {
    use heiscay::permcheck::GenTag;
    let mut ag = ActionGens::new(n);
    ag.push(
        Perm::from_images((0..n).map(|i| ((i + 1) % n) as u32).collect()),
        GenTag::Translation,
    );
    ag.push(
        Perm::from_images((0..n).map(|i| ((n - i) % n) as u32).collect()),
        GenTag::Automorphism,
    );
    ag
}

/// Every digraph on at most 8 vertices used for brute-force comparisons.
pub fn small_corpus() -> Vec<Digraph> {
    use heiscay::cli::{build, plan};
    use heiscay::heisenberg::DEFAULT_BUDGET;
    use heiscay::smallvalency::build_k2;
    use heiscay::OrientationKind;
    let mut corpus = vec![
        cycle_graph(6),
        cycle_graph(4),
        cycle_graph(5),
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)], None).unwrap(),
        sym_digraph(3, &[(0, 1), (1, 2)]),
        sym_digraph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        sym_digraph(4, &[(0, 1), (2, 3)]),
        sym_digraph(4, &[(0, 1), (0, 2), (0, 3)]),
        Digraph::from_arcs(5, [], None).unwrap(),
        Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (0, 3)], None).unwrap(),
        build_k2(2, OrientationKind::Oriented).unwrap().digraph,
        build_k2(2, OrientationKind::Graph).unwrap().digraph,
        build_k2(3, OrientationKind::Graph).unwrap().digraph,
        build_k2(4, OrientationKind::Graph).unwrap().digraph,
    ];
    let p = plan(3, 2, OrientationKind::Oriented, None).unwrap();
    corpus.push(build(&p, DEFAULT_BUDGET).unwrap().digraph);
    corpus
}
