//! Semidirect extensions of a Heisenberg quotient by `t` and `b`.
//!
//! Elements are written `h t^eps b^j`, automorphisms act on the right and
//! `x^b = b^-1 x b`. On `R = H ⋊ <t>` the automorphism `b` acts by
//! `(h t^e)^b = h^b x_{n+1}^e t^e`.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::heisenberg::{Heis, HeisElem, HeisError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error("element has a nonzero b-part (j = {0}); only elements of R are accepted")]
    HasBPart(u32),
    #[error("degenerate generating set: {0}")]
    DegenerateGenerators(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem {
    pub h: HeisElem,
    /// t-exponent, 0 or 1.
    pub eps: u8,
    /// b-exponent modulo k.
    pub j: u32,
}

impl ExtElem {
    pub fn from_heis(h: HeisElem) -> Self {
        ExtElem { h, eps: 0, j: 0 }
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.h)?;
        if self.eps == 1 {
            write!(f, "t")?;
        }
        if self.j != 0 {
            write!(f, "b^{}", self.j)?;
        }
        Ok(())
    }
}

/// The connection sets: `S` (conjugates of `t`) and `P` (conjugates of `x_{n+1}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSets {
    pub s: Vec<ExtElem>,
    pub p: Vec<HeisElem>,
}

#[derive(Debug, Clone)]
pub struct Ext {
    heis: Heis,
}

impl Ext {
    pub fn new(heis: Heis) -> Self {
        Ext { heis }
    }

    pub fn heis(&self) -> &Heis {
        &self.heis
    }

    fn k(&self) -> u32 {
        self.heis.params().k
    }

    pub fn identity(&self) -> ExtElem {
        ExtElem::from_heis(self.heis.identity())
    }

    pub fn t(&self) -> ExtElem {
        ExtElem {
            h: self.heis.identity(),
            eps: 1,
            j: 0,
        }
    }

    pub fn b(&self) -> ExtElem {
        ExtElem {
            h: self.heis.identity(),
            eps: 0,
            j: 1 % self.k(),
        }
    }

    pub fn is_valid(&self, g: &ExtElem) -> bool {
        self.heis.is_valid(&g.h) && g.eps < 2 && g.j < self.k()
    }

    /// The b-image of an element of R, ignoring its b-part.
    fn b_on_r(&self, g: &ExtElem) -> ExtElem {
        let n = self.heis.params().n as usize;
        let mut h = self.heis.auto_b(&g.h);
        if g.eps == 1 {
            h = self.heis.mul(&h, &self.heis.x(n + 1));
        }
        ExtElem { h, eps: g.eps, j: 0 }
    }

    fn b_on_r_times(&self, g: &ExtElem, times: u32) -> ExtElem {
        let mut out = ExtElem {
            h: g.h.clone(),
            eps: g.eps,
            j: 0,
        };
        for _ in 0..times % self.k() {
            out = self.b_on_r(&out);
        }
        out
    }

    pub fn apply_b(&self, g: &ExtElem) -> Result<ExtElem, ExtError> {
        if g.j != 0 {
            return Err(ExtError::HasBPart(g.j));
        }
        Ok(self.b_on_r(g))
    }

    pub fn mul(&self, g1: &ExtElem, g2: &ExtElem) -> ExtElem {
        let k = self.k();
        // b^j1 y = y^(b^-j1) b^j1, and b^-1 acts as b^(k-1)
        let y = self.b_on_r_times(g2, (k - g1.j % k) % k);
        let yh = if g1.eps == 1 {
            self.heis.auto_t(&y.h)
        } else {
            y.h
        };
        ExtElem {
            h: self.heis.mul(&g1.h, &yh),
            eps: g1.eps ^ y.eps,
            j: (g1.j + g2.j) % k,
        }
    }

    pub fn checked_mul(&self, g1: &ExtElem, g2: &ExtElem) -> Result<ExtElem, ExtError> {
        for g in [g1, g2] {
            if !self.is_valid(g) {
                let p = self.heis.params();
                return Err(HeisError::ParamMismatch { k: p.k, m: p.m }.into());
            }
        }
        Ok(self.mul(g1, g2))
    }

    pub fn inverse(&self, g: &ExtElem) -> ExtElem {
        let k = self.k();
        let b_inv = ExtElem {
            h: self.heis.identity(),
            eps: 0,
            j: (k - g.j % k) % k,
        };
        let t_part = ExtElem {
            h: self.heis.identity(),
            eps: g.eps,
            j: 0,
        };
        let h_inv = ExtElem::from_heis(self.heis.inverse(&g.h));
        self.mul(&b_inv, &self.mul(&t_part, &h_inv))
    }

    /// `x_{n+i} x_{n+i-1} ... x_{n+1} t` for `1 <= i <= n`.
    pub fn closed_form_low(&self, i: usize) -> ExtElem {
        let n = self.heis.params().n as usize;
        let h = (1..=i)
            .rev()
            .fold(self.heis.identity(), |acc, j| self.heis.mul(&acc, &self.heis.x(n + j)));
        ExtElem { h, eps: 1, j: 0 }
    }

    /// `x_i^-1 t` for `1 <= i <= n`.
    pub fn closed_form_high(&self, i: usize) -> ExtElem {
        ExtElem {
            h: self.heis.inverse(&self.heis.x(i)),
            eps: 1,
            j: 0,
        }
    }

    pub fn gen_sets(&self) -> Result<GenSets, ExtError> {
        let heis = &self.heis;
        let n = heis.params().n as usize;
        let k = self.k() as usize;

        let mut s = vec![self.t()];
        let mut p = vec![heis.x(n + 1)];
        for _ in 1..k {
            s.push(self.b_on_r(s.last().unwrap()));
            p.push(heis.auto_b(p.last().unwrap()));
        }

        let distinct_s: HashSet<&ExtElem> = s.iter().collect();
        let distinct_p: HashSet<&HeisElem> = p.iter().collect();
        if distinct_s.len() != k || distinct_p.len() != k {
            return Err(ExtError::DegenerateGenerators(format!(
                "expected {k} distinct conjugates, got |S| = {}, |P| = {}",
                distinct_s.len(),
                distinct_p.len()
            )));
        }
        let id = self.identity();
        if let Some(bad) = s.iter().find(|x| self.mul(x, x) != id) {
            return Err(ExtError::DegenerateGenerators(format!(
                "{bad} is not an involution"
            )));
        }
        if let Some(bad) = p.iter().find(|x| distinct_p.contains(&heis.inverse(x))) {
            return Err(ExtError::DegenerateGenerators(format!(
                "inverse of {bad} lies in P"
            )));
        }
        if self.b_on_r(&s[k - 1]) != s[0] || heis.auto_b(&p[k - 1]) != p[0] {
            return Err(ExtError::DegenerateGenerators(
                "b does not act with order k on the generating sets".into(),
            ));
        }
        for i in 1..=n {
            if s[i] != self.closed_form_low(i) || s[n + i] != self.closed_form_high(i) {
                return Err(ExtError::DegenerateGenerators(format!(
                    "closed form for t^(b^{i}) or t^(b^{}) does not hold",
                    n + i
                )));
            }
        }
        Ok(GenSets { s, p })
    }

    /// Elements of `R`: the `t`-free half first, each half in Heisenberg order.
    pub fn enumerate_r(&self, budget: u64) -> Result<Vec<ExtElem>, ExtError> {
        let half = self.heis.params().order();
        let total = half.saturating_mul(2);
        if total > budget {
            return Err(HeisError::BudgetExceeded {
                what: "extension by t",
                needed: total,
                budget,
            }
            .into());
        }
        let hs = self.heis.enumerate_elements(budget)?;
        Ok((0..2u8)
            .flat_map(|eps| {
                hs.iter().map(move |h| ExtElem {
                    h: h.clone(),
                    eps,
                    j: 0,
                })
            })
            .collect())
    }

    pub fn index_of_r(&self, g: &ExtElem) -> usize {
        g.eps as usize * self.heis.params().order() as usize + self.heis.index_of(&g.h)
    }
}
