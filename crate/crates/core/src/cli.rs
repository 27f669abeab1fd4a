//! Plan, build and certify an arc-transitive digraph of given valency `k`
//! with blocks of size `m`.
//!
//! A prime valency `p` is built directly (a Heisenberg quotient for odd `p`,
//! one of the valency-two constructions for `p = 2`); a composite valency
//! `k = p * a` takes the `a`-th Cartesian power of a prime base.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::autsearch::{count_automorphisms, DEFAULT_VERTEX_CAP};
use crate::digraph::{
    cartesian_power, cayley, is_strongly_connected, orientation_kind, out_valency, Digraph,
    DigraphError, OrientationKind, Valency,
};
use crate::group_ext::{Ext, ExtError};
use crate::heisenberg::{
    checked_pow, is_prime, make_params, Heis, HeisError, QuotientKind, StructureReport,
    DEFAULT_BUDGET,
};
use crate::permcheck::{
    action_gens, block_orbit, closure_order, diagonal_index, diagonal_lift, is_automorphism,
    check_transitive, min_block, wreath_lift, z_block_partition, ActionGens, BlockSystem, Flavor,
    PermError,
};
use crate::smallvalency::{base_order, build_k2, SmallError};

/// Default cap on the number of permutations enumerated by `closure_order`.
pub const DEFAULT_GROUP_CAP: u64 = 100_000;

/// Cap on `group order x points` held in memory by the closure.
const CLOSURE_POINT_BUDGET: u64 = 25_000_000;

/// Environment variable overriding the vertex/element budget.
pub const BUDGET_ENV: &str = "HEISCAY_BUDGET";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("k = {0}: valency must be at least 2")]
    BadK(u64),
    #[error("m = {0}: m must be at least 2 (the case m = 1 is vacuous, every singleton is a block)")]
    VacuousM(u64),
    #[error("{p} is not a prime divisor of k = {k}")]
    BadBasePrime { k: u64, p: u64 },
    #[error("construction needs {needed} vertices, above the budget of {budget} (set {BUDGET_ENV} to raise it)")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("heisenberg: {0}")]
    Heis(#[from] HeisError),
    #[error("extension: {0}")]
    Ext(#[from] ExtError),
    #[error("digraph: {0}")]
    Digraph(#[from] DigraphError),
    #[error("permutation check: {0}")]
    Perm(#[from] PermError),
    #[error("valency-two base: {0}")]
    Small(#[from] SmallError),
    #[error("certification failed: {property}")]
    CertificationFailed {
        property: String,
        report: Box<CertReport>,
    },
}

impl PipelineError {
    /// Whether the error stems from the inputs rather than from a failed check.
    pub fn is_usage(&self) -> bool {
        !matches!(self, PipelineError::CertificationFailed { .. })
    }
}

/// Reads the budget from [`BUDGET_ENV`], falling back to the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BuildPlan {
    pub k: u64,
    pub m: u64,
    pub kind: OrientationKind,
    pub base_prime: u64,
    pub power: u32,
    pub base_vertices: u64,
    pub predicted_vertices: u64,
}

fn prime_divisors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            out.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

fn base_vertices(p: u64, m: u64, kind: OrientationKind) -> u64 {
    if p == 2 {
        return base_order(m, kind);
    }
    let core = u32::try_from(p)
        .ok()
        .and_then(|p| checked_pow(m, p))
        .unwrap_or(u64::MAX);
    match kind {
        OrientationKind::Graph => core.saturating_mul(2),
        _ => core,
    }
}

fn plan_for(k: u64, m: u64, kind: OrientationKind, p: u64) -> BuildPlan {
    let power = (k / p) as u32;
    let base = base_vertices(p, m, kind);
    BuildPlan {
        k,
        m,
        kind,
        base_prime: p,
        power,
        base_vertices: base,
        predicted_vertices: checked_pow(base, power).unwrap_or(u64::MAX),
    }
}

/// Chooses the prime base minimizing the vertex count (ties go to the
/// larger prime), unless `base_prime` forces one.
pub fn plan(
    k: u64,
    m: u64,
    kind: OrientationKind,
    base_prime: Option<u64>,
) -> Result<BuildPlan, PipelineError> {
    if k < 2 {
        return Err(PipelineError::BadK(k));
    }
    if m < 2 {
        return Err(PipelineError::VacuousM(m));
    }
    if kind == OrientationKind::Mixed {
        return Err(SmallError::MixedKind.into());
    }
    let primes = prime_divisors(k);
    if let Some(p) = base_prime {
        if !primes.contains(&p) {
            return Err(PipelineError::BadBasePrime { k, p });
        }
        return Ok(plan_for(k, m, kind, p));
    }
    Ok(primes
        .into_iter()
        .map(|p| plan_for(k, m, kind, p))
        .min_by_key(|pl| (pl.predicted_vertices, std::cmp::Reverse(pl.base_prime)))
        .expect("k >= 2 has a prime divisor"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    /// Prime valency, no power taken.
    None,
    /// Full wreath product in product action.
    Wreath,
    /// Translations per coordinate, base automorphisms diagonally.
    DiagonalAutomorphism,
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub plan: BuildPlan,
    pub digraph: Digraph,
    pub gens: ActionGens,
    pub blocks: BlockSystem,
    pub lift: Lift,
    /// Group order the generators should produce, when it fits in `u64`.
    pub expected_group_order: Option<u64>,
    /// The Heisenberg quotient behind an odd prime base.
    pub heis: Option<Heis>,
}

struct Base {
    digraph: Digraph,
    gens: ActionGens,
    blocks: BlockSystem,
    group_order: u64,
    heis: Option<Heis>,
}

fn odd_prime_base(p: u64, m: u64, kind: OrientationKind, budget: u64) -> Result<Base, PipelineError> {
    let params = make_params(p, m)?;
    let ext = Ext::new(Heis::new(params));
    let heis = ext.heis();
    let sets = ext.gen_sets()?;
    let order = params.order();
    let (digraph, flavor, group_order) = match kind {
        OrientationKind::Graph => {
            let elems = ext.enumerate_r(budget)?;
            let d = cayley(&elems, &sets.s, |s, g| ext.mul(s, g), |g| g.to_string())?;
            (d, Flavor::G, 2 * p * order)
        }
        _ => {
            let elems = heis.enumerate_elements(budget)?;
            let d = cayley(&elems, &sets.p, |s, g| heis.mul(s, g), |g| g.to_string())?;
            (d, Flavor::L, p * order)
        }
    };
    Ok(Base {
        digraph,
        gens: action_gens(&ext, flavor, budget)?,
        blocks: z_block_partition(&ext, flavor),
        group_order,
        heis: Some(heis.clone()),
    })
}

fn small_base(m: u64, kind: OrientationKind) -> Result<Base, PipelineError> {
    let b = build_k2(m, kind)?;
    let group_order = match kind {
        OrientationKind::Graph => 4 * m,
        _ if m == 2 => 16,
        _ => 6 * m,
    };
    Ok(Base {
        digraph: b.digraph,
        gens: b.gens,
        blocks: b.blocks,
        group_order,
        heis: None,
    })
}

fn factorial(a: u32) -> Option<u64> {
    (1..=a as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

pub fn build(plan: &BuildPlan, budget: u64) -> Result<BuildOutput, PipelineError> {
    if plan.predicted_vertices > budget {
        return Err(PipelineError::BudgetExceeded {
            needed: plan.predicted_vertices,
            budget,
        });
    }
    let base = if plan.base_prime == 2 {
        small_base(plan.m, plan.kind)?
    } else {
        odd_prime_base(plan.base_prime, plan.m, plan.kind, budget)?
    };
    if plan.power == 1 {
        return Ok(BuildOutput {
            plan: *plan,
            digraph: base.digraph,
            gens: base.gens,
            blocks: base.blocks,
            lift: Lift::None,
            expected_group_order: Some(base.group_order),
            heis: base.heis,
        });
    }

    let a = plan.power;
    let n = base.digraph.n_vertices();
    let digraph = cartesian_power(&base.digraph, a, budget)?;
    let base_cell = &base.blocks.cells[0];
    let diagonal: Vec<u32> = base_cell
        .iter()
        .map(|&u| diagonal_index(u as usize, n, a) as u32)
        .collect();

    let wreath = wreath_lift(&base.gens, a, budget)?;
    let (gens, lift, images) = match block_orbit(&wreath, &diagonal) {
        Some(images) => (wreath, Lift::Wreath, images),
        None => {
            let dl = diagonal_lift(&base.gens, a, budget)?;
            let images = block_orbit(&dl, &diagonal).unwrap_or_else(|| vec![diagonal.clone()]);
            (dl, Lift::DiagonalAutomorphism, images)
        }
    };
    let vertices_a = checked_pow(n as u64, a);
    let expected_group_order = match lift {
        Lift::Wreath => checked_pow(base.group_order, a),
        _ => vertices_a.and_then(|v| v.checked_mul(base.group_order / n as u64)),
    }
    .and_then(|o| factorial(a).and_then(|f| o.checked_mul(f)));

    Ok(BuildOutput {
        plan: *plan,
        digraph,
        gens,
        blocks: BlockSystem::new(images),
        lift,
        expected_group_order,
        heis: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub budget: u64,
    pub group_cap: u64,
    pub aut_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: DEFAULT_BUDGET,
            group_cap: DEFAULT_GROUP_CAP,
            aut_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inputs {
    pub k: u64,
    pub kind: OrientationKind,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutSummary {
    pub status: &'static str,
    pub order: Option<u64>,
    /// `|Aut| / |group|` as an integer or reduced fraction.
    pub ratio: Option<String>,
    /// Ratio predicted for even-`m` prime-valency graphs; never asserted.
    pub expected_ratio: Option<u64>,
    pub agrees_with_expected: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub aut_ms: f64,
    pub build_ms: f64,
    pub certify_ms: f64,
}

/// Every boolean field is the output of a check run by [`certify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertReport {
    pub arc_transitive: bool,
    pub arcs: usize,
    pub aut: AutSummary,
    pub block_certified: bool,
    pub block_count: usize,
    pub block_size: usize,
    pub connected: bool,
    pub generators: usize,
    pub generators_are_automorphisms: bool,
    pub group_order: Option<u64>,
    pub group_order_expected: Option<u64>,
    pub group_order_status: &'static str,
    pub inputs: Inputs,
    pub lift: Lift,
    pub min_block_crosscheck: bool,
    pub min_block_size: usize,
    pub notes: Vec<String>,
    pub orientation: OrientationKind,
    pub plan: BuildPlan,
    pub structure: Option<StructureReport>,
    pub timings: Timings,
    pub v_vector_used: Option<Vec<u8>>,
    pub valency: Option<usize>,
    pub vertex_transitive: bool,
    pub vertices: usize,
}

impl CertReport {
    /// JSON with keys in alphabetical order at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    /// First failed property, if any.
    pub fn first_failure(&self) -> Option<String> {
        let k = self.inputs.k as usize;
        let m = self.inputs.m as usize;
        let checks: [(bool, String); 9] = [
            (self.valency == Some(k), format!("valency {:?} != {k}", self.valency)),
            (
                self.orientation == self.inputs.kind,
                format!("orientation {:?} != {:?}", self.orientation, self.inputs.kind),
            ),
            (self.connected, "strong connectivity".into()),
            (self.generators_are_automorphisms, "generators are automorphisms".into()),
            (self.vertex_transitive, "vertex transitivity".into()),
            (self.arc_transitive, "arc transitivity".into()),
            (
                self.block_certified && self.block_size == m,
                format!("block system of size {m} (got {})", self.block_size),
            ),
            (self.min_block_crosscheck, "minimal block crosscheck".into()),
            (
                self.group_order.is_none() || self.group_order == self.group_order_expected,
                format!(
                    "group order {:?} != expected {:?}",
                    self.group_order, self.group_order_expected
                ),
            ),
        ];
        if let Some((_, what)) = checks.into_iter().find(|(ok, _)| !ok) {
            return Some(what);
        }
        if let Some(s) = &self.structure {
            let order = checked_pow(self.inputs.m, self.plan.base_prime as u32);
            if Some(s.group_order) != order || s.z_order != self.inputs.m {
                return Some("structure of the Heisenberg quotient".into());
            }
        }
        None
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn certify(out: &BuildOutput, opts: &CertifyOptions) -> Result<CertReport, PipelineError> {
    let start = Instant::now();
    let d = &out.digraph;
    let n = d.n_vertices();
    let plan = &out.plan;

    let valency = match out_valency(d) {
        Valency::Uniform(v) => Some(v),
        Valency::NonUniform { .. } => None,
    };
    let orientation = orientation_kind(d);
    let connected = is_strongly_connected(d);

    let mut generators_are_automorphisms = true;
    for g in &out.gens.gens {
        generators_are_automorphisms &= is_automorphism(g, d)?;
    }
    let (vertex_transitive, arc_transitive) = if generators_are_automorphisms {
        let t = check_transitive(&out.gens, d)?;
        (t.vertex_transitive, t.arc_transitive)
    } else {
        (false, false)
    };

    // every cell is an image of the first one, so certifying the first
    // cell and matching its set-orbit against the partition covers all
    let cell = &out.blocks.cells[0];
    let block_certified = out.blocks.is_partition_of(n)
        && block_orbit(&out.gens, cell).map(BlockSystem::new).as_ref() == Some(&out.blocks);

    let (min_block_size, min_block_crosscheck) = if cell.len() >= 2 {
        match min_block(&out.gens, cell[0] as usize, cell[1] as usize) {
            Ok(mb) => {
                let inside = mb.iter().all(|x| cell.binary_search(x).is_ok());
                let divides = cell.len() % mb.len() == 0;
                let full = !is_prime(plan.m) || mb.len() == cell.len();
                (mb.len(), inside && divides && full)
            }
            Err(PermError::NotTransitive) => (0, false),
            Err(e) => return Err(e.into()),
        }
    } else {
        (cell.len(), false)
    };

    let cap = opts.group_cap.min(CLOSURE_POINT_BUDGET / n.max(1) as u64);
    let skip = out.expected_group_order.map_or(true, |e| e > cap);
    let (group_order, group_order_status) = if skip {
        (None, "skipped")
    } else {
        match closure_order(&out.gens, cap) {
            Ok(o) => (Some(o), "computed"),
            Err(PermError::CapExceeded(_)) => (None, "skipped"),
            Err(e) => return Err(e.into()),
        }
    };

    let structure = match &out.heis {
        Some(h) => Some(h.structure_report(opts.budget)?),
        None => None,
    };
    let kind_e = out
        .heis
        .as_ref()
        .filter(|h| h.params().kind == QuotientKind::E);
    let v_vector_used = kind_e.map(|h| h.v().0.clone());
    let mut notes = Vec::new();
    if kind_e.is_some() {
        notes.push(
            "v-vector: v_1 has the parity of n, which makes v_1 + v_{n+1} + ... + v_{2n} even; \
             the b-map is certified as an automorphism under this choice"
                .to_string(),
        );
    }
    if out.lift == Lift::DiagonalAutomorphism {
        notes.push(
            "the diagonal cell is not a block for the full wreath product of this base; \
             certified under the subgroup with base automorphisms acting diagonally"
                .to_string(),
        );
    }
    let certify_ms = ms(start);

    let aut_start = Instant::now();
    let aut = if n <= opts.aut_cap {
        let res = count_automorphisms(d, opts.aut_cap).expect("size checked above");
        let order = u64::try_from(res.aut_order).ok();
        let ratio = order.zip(group_order).map(|(a, g)| {
            let q = gcd(a, g);
            if g / q == 1 {
                (a / q).to_string()
            } else {
                format!("{}/{}", a / q, g / q)
            }
        });
        let expected_ratio = (kind_e.is_some()
            && plan.kind == OrientationKind::Graph
            && out.lift == Lift::None)
            .then_some(2);
        let agrees_with_expected = expected_ratio
            .zip(ratio.as_ref())
            .map(|(e, r)| *r == e.to_string());
        AutSummary {
            status: "computed",
            order,
            ratio,
            expected_ratio,
            agrees_with_expected,
        }
    } else {
        AutSummary {
            status: "skipped",
            order: None,
            ratio: None,
            expected_ratio: None,
            agrees_with_expected: None,
        }
    };

    let report = CertReport {
        arc_transitive,
        arcs: d.n_arcs(),
        aut,
        block_certified,
        block_count: out.blocks.cells.len(),
        block_size: out.blocks.cell_size(),
        connected,
        generators: out.gens.len(),
        generators_are_automorphisms,
        group_order,
        group_order_expected: out.expected_group_order,
        group_order_status,
        inputs: Inputs {
            k: plan.k,
            kind: plan.kind,
            m: plan.m,
        },
        lift: out.lift,
        min_block_crosscheck,
        min_block_size,
        notes,
        orientation,
        plan: *plan,
        structure,
        timings: Timings {
            aut_ms: ms(aut_start),
            build_ms: 0.0,
            certify_ms,
        },
        v_vector_used,
        valency,
        vertex_transitive,
        vertices: n,
    };
    match report.first_failure() {
        None => Ok(report),
        Some(property) => Err(PipelineError::CertificationFailed {
            property,
            report: Box::new(report),
        }),
    }
}

/// Plans, builds and certifies in one go; the build time lands in the report.
pub fn run_pipeline(
    k: u64,
    m: u64,
    kind: OrientationKind,
    base_prime: Option<u64>,
    opts: &CertifyOptions,
) -> Result<(BuildOutput, CertReport), PipelineError> {
    let pl = plan(k, m, kind, base_prime)?;
    let t = Instant::now();
    let out = build(&pl, opts.budget)?;
    let build_ms = ms(t);
    let stamp = |r: &mut CertReport| r.timings.build_ms = build_ms;
    match certify(&out, opts) {
        Ok(mut r) => {
            stamp(&mut r);
            Ok((out, r))
        }
        Err(PipelineError::CertificationFailed { property, mut report }) => {
            stamp(&mut report);
            Err(PipelineError::CertificationFailed { property, report })
        }
        Err(e) => Err(e),
    }
}
