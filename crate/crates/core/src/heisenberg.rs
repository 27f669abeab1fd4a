//! Finite quotients of the discrete Heisenberg group in prime dimension.
//!
//! For an odd prime `k = 2n + 1` the group is generated by `x_1..x_2n` and a
//! central `z`, with `[x_i, x_{i+n}] = z` and every other pair of `x`'s
//! commuting. Elements are stored in the normal form
//! `x_1^a_1 ... x_2n^a_2n z^c` with every exponent reduced modulo `m`.
//!
//! Two quotients are supported:
//!
//! * [`QuotientKind::N`] (odd `m`): `x_i^m = z^m = 1`.
//! * [`QuotientKind::E`] (even `m`): `x_i^m = z^(-v_i m/2)` and `z^m = 1`,
//!   where `v` is the 0/1 pattern returned by [`v_vector`].

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Default cap on the number of elements or vertices materialized at once.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisError {
    #[error("k = {0} is not an odd prime")]
    NonPrimeK(u64),
    #[error("m = {0}: m must be at least 2 (the case m = 1 is vacuous, every singleton is a block)")]
    VacuousM(u64),
    #[error("element does not belong to the group with k = {k}, m = {m}")]
    ParamMismatch { k: u32, m: u32 },
    #[error("{what} needs {needed} elements, above the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Which normal subgroup the infinite group is divided by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QuotientKind {
    /// `m` odd: kernel generated by `x_i^m` and `z^m`.
    N,
    /// `m` even: kernel generated by `x_i^m z^(v_i m/2)` and `z^m`.
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    pub k: u32,
    pub n: u32,
    pub m: u32,
    pub kind: QuotientKind,
}

impl Params {
    /// Number of group elements, `m^k`, saturating on overflow.
    pub fn order(&self) -> u64 {
        checked_pow(self.m as u64, self.k).unwrap_or(u64::MAX)
    }
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn make_params(k: u64, m: u64) -> Result<Params, HeisError> {
    if k < 3 || !is_prime(k) || k > u32::MAX as u64 {
        return Err(HeisError::NonPrimeK(k));
    }
    if m < 2 {
        return Err(HeisError::VacuousM(m));
    }
    let m = u32::try_from(m).map_err(|_| HeisError::BudgetExceeded {
        what: "modulus",
        needed: m,
        budget: u32::MAX as u64,
    })?;
    let k = k as u32;
    Ok(Params {
        k,
        n: (k - 1) / 2,
        m,
        kind: if m % 2 == 1 {
            QuotientKind::N
        } else {
            QuotientKind::E
        },
    })
}

/// The 0/1 exponent pattern used by the even-`m` kernel, indexed from 0
/// (entry `i - 1` holds `v_i`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VVector(pub Vec<u8>);

/// `v_i = 1` for `n <= i <= 2n`; below `n` the values alternate downward
/// starting from `v_{n-1} = 0`, so `v_1` has the parity of `n`.
pub fn v_vector(n: u32) -> VVector {
    let n = n as usize;
    let v = (1..=2 * n)
        .map(|i| {
            if i >= n || (n - i) % 2 == 0 {
                1
            } else {
                0
            }
        })
        .collect();
    VVector(v)
}

/// Normal-form element: exponents of `x_1..x_2n` and of `z`, all in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisElem {
    pub a: Vec<u32>,
    pub c: u32,
}

impl fmt::Display for HeisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "|{})", self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub group_order: u64,
    pub center_order: u64,
    pub derived_order: u64,
    pub central_quotient_order: u64,
    pub central_quotient_elementary_abelian: bool,
    pub z_order: u64,
}

/// A finite Heisenberg quotient together with the automorphisms `t` and `b`.
#[derive(Debug, Clone)]
pub struct Heis {
    params: Params,
    v: VVector,
    t_images: Vec<HeisElem>,
    b_images: Vec<HeisElem>,
}

impl Heis {
    pub fn new(params: Params) -> Self {
        let mut heis = Heis {
            params,
            v: v_vector(params.n),
            t_images: Vec::new(),
            b_images: Vec::new(),
        };
        let n = params.n as usize;
        heis.t_images = (1..=2 * n).map(|i| heis.inverse(&heis.x(i))).collect();
        heis.b_images = (1..=2 * n)
            .map(|i| {
                if i < n {
                    heis.mul(&heis.x(i + 1), &heis.x(n + 1))
                } else if i < 2 * n {
                    heis.x(i + 1)
                } else {
                    // x_1^-1 x_{n+1}^-1 ... x_{2n}^-1
                    std::iter::once(1)
                        .chain(n + 1..=2 * n)
                        .fold(heis.identity(), |acc, j| {
                            heis.mul(&acc, &heis.inverse(&heis.x(j)))
                        })
                }
            })
            .collect();
        heis
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn v(&self) -> &VVector {
        &self.v
    }

    fn dim(&self) -> usize {
        2 * self.params.n as usize
    }

    pub fn identity(&self) -> HeisElem {
        HeisElem {
            a: vec![0; self.dim()],
            c: 0,
        }
    }

    /// The generator `x_i`, 1-based.
    pub fn x(&self, i: usize) -> HeisElem {
        assert!((1..=self.dim()).contains(&i), "generator index out of range");
        let mut g = self.identity();
        g.a[i - 1] = 1;
        g
    }

    pub fn z(&self) -> HeisElem {
        let mut g = self.identity();
        g.c = 1;
        g
    }

    pub fn generators(&self) -> Vec<HeisElem> {
        (1..=self.dim()).map(|i| self.x(i)).collect()
    }

    pub fn is_valid(&self, g: &HeisElem) -> bool {
        let m = self.params.m;
        g.a.len() == self.dim() && g.c < m && g.a.iter().all(|&x| x < m)
    }

    fn check(&self, g: &HeisElem) -> Result<(), HeisError> {
        if self.is_valid(g) {
            Ok(())
        } else {
            Err(HeisError::ParamMismatch {
                k: self.params.k,
                m: self.params.m,
            })
        }
    }

    /// Normal-form product.
    ///
    /// Moving `x_j^b` left past `x_{j+n}^a` costs `z^(-ab)`; in the E quotient
    /// each coordinate that wraps past `m` contributes `z^(-v_i m/2)`.
    pub fn mul(&self, g: &HeisElem, h: &HeisElem) -> HeisElem {
        debug_assert!(self.is_valid(g) && self.is_valid(h));
        let m = self.params.m as i64;
        let n = self.params.n as usize;
        let half = m / 2;
        let mut c = g.c as i64 + h.c as i64;
        for j in 0..n {
            c -= g.a[j + n] as i64 * h.a[j] as i64;
        }
        let mut a = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            let mut s = g.a[i] + h.a[i];
            if s >= self.params.m {
                s -= self.params.m;
                if self.params.kind == QuotientKind::E {
                    c -= self.v.0[i] as i64 * half;
                }
            }
            a.push(s);
        }
        HeisElem {
            a,
            c: c.rem_euclid(m) as u32,
        }
    }

    pub fn checked_mul(&self, g: &HeisElem, h: &HeisElem) -> Result<HeisElem, HeisError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    pub fn inverse(&self, g: &HeisElem) -> HeisElem {
        let m = self.params.m;
        let a: Vec<u32> = g.a.iter().map(|&x| (m - x) % m).collect();
        let partial = self.mul(
            g,
            &HeisElem {
                a: a.clone(),
                c: 0,
            },
        );
        // z is central, so the remaining z-exponent is cancelled directly
        HeisElem {
            a,
            c: (m - partial.c) % m,
        }
    }

    pub fn power(&self, g: &HeisElem, e: i64) -> HeisElem {
        let mut base = if e < 0 { self.inverse(g) } else { g.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn element_order(&self, g: &HeisElem) -> u64 {
        let id = self.identity();
        let mut acc = g.clone();
        let mut order = 1;
        while acc != id {
            acc = self.mul(&acc, g);
            order += 1;
        }
        order
    }

    /// `g^-1 h^-1 g h`.
    pub fn commutator(&self, g: &HeisElem, h: &HeisElem) -> HeisElem {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    /// Evaluates the normal-form word of `g` with each `x_i` replaced by
    /// `images[i - 1]` and `z` by `z_image`.
    pub fn apply_hom(&self, images: &[HeisElem], z_image: &HeisElem, g: &HeisElem) -> HeisElem {
        let mut acc = self.identity();
        for (img, &e) in images.iter().zip(&g.a) {
            if e != 0 {
                acc = self.mul(&acc, &self.power(img, e as i64));
            }
        }
        if g.c != 0 {
            acc = self.mul(&acc, &self.power(z_image, g.c as i64));
        }
        acc
    }

    /// The involution inverting every `x_i` and fixing `z`.
    pub fn auto_t(&self, g: &HeisElem) -> HeisElem {
        self.apply_hom(&self.t_images, &self.z(), g)
    }

    /// The order-`k` automorphism `b`; fixes `z`.
    pub fn auto_b(&self, g: &HeisElem) -> HeisElem {
        self.apply_hom(&self.b_images, &self.z(), g)
    }

    pub fn b_images(&self) -> &[HeisElem] {
        &self.b_images
    }

    /// Position of `g` in [`Heis::enumerate_elements`].
    pub fn index_of(&self, g: &HeisElem) -> usize {
        let m = self.params.m as usize;
        let idx = g.a.iter().fold(0usize, |acc, &x| acc * m + x as usize);
        idx * m + g.c as usize
    }

    pub fn from_index(&self, mut idx: usize) -> HeisElem {
        let m = self.params.m as usize;
        let c = (idx % m) as u32;
        idx /= m;
        let mut a = vec![0; self.dim()];
        for slot in a.iter_mut().rev() {
            *slot = (idx % m) as u32;
            idx /= m;
        }
        HeisElem { a, c }
    }

    /// All `m^k` elements in lexicographic order of `(a_1, ..., a_2n, c)`.
    pub fn enumerate_elements(&self, budget: u64) -> Result<Vec<HeisElem>, HeisError> {
        let order = self.params.order();
        if order > budget {
            return Err(HeisError::BudgetExceeded {
                what: "Heisenberg quotient",
                needed: order,
                budget,
            });
        }
        Ok((0..order as usize).map(|i| self.from_index(i)).collect())
    }

    pub fn structure_report(&self, budget: u64) -> Result<StructureReport, HeisError> {
        let elements = self.enumerate_elements(budget)?;
        let gens = self.generators();
        let m = self.params.m as i64;

        let center: Vec<&HeisElem> = elements
            .iter()
            .filter(|g| gens.iter().all(|x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        let in_center = |g: &HeisElem| center.contains(&g);

        // derived subgroup: normal closure of generator commutators
        let mut derived: HashSet<HeisElem> = HashSet::new();
        let mut queue = VecDeque::new();
        let id = self.identity();
        derived.insert(id.clone());
        queue.push_back(id);
        for x in &gens {
            for y in &gens {
                let c = self.commutator(x, y);
                if derived.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
        let seeds: Vec<HeisElem> = derived.iter().cloned().collect();
        while let Some(g) = queue.pop_front() {
            let mut next = Vec::new();
            for s in &seeds {
                next.push(self.mul(&g, s));
            }
            for x in &gens {
                next.push(self.mul(&self.mul(&self.inverse(x), &g), x));
            }
            for h in next {
                if derived.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }

        let quotient_abelian = gens
            .iter()
            .all(|x| gens.iter().all(|y| in_center(&self.commutator(x, y))));
        let exponent_divides_m = elements.iter().all(|g| in_center(&self.power(g, m)));

        Ok(StructureReport {
            group_order: elements.len() as u64,
            center_order: center.len() as u64,
            derived_order: derived.len() as u64,
            central_quotient_order: (elements.len() / center.len()) as u64,
            central_quotient_elementary_abelian: quotient_abelian && exponent_divides_m,
            z_order: self.element_order(&self.z()),
        })
    }
}
