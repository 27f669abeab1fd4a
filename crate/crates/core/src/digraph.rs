//! Finite digraphs, Cayley digraphs, Cartesian powers and text exporters.
//!
//! Cayley digraphs use left multiplication: the arcs of `Cay(G, S)` are
//! `(g, s g)`, so right translations are automorphisms.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("arc ({0}, {0}) is a loop")]
    LoopGenerated(usize),
    #[error("arc ({0}, {1}) leaves the vertex range")]
    OutOfRange(usize, usize),
    #[error("product of connection element {connection} with vertex {vertex} is not in the element list")]
    NotClosed { connection: usize, vertex: usize },
    #[error("{what} needs {needed} vertices, above the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationKind {
    Graph,
    Oriented,
    Mixed,
}

impl OrientationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrientationKind::Graph => "graph",
            OrientationKind::Oriented => "oriented",
            OrientationKind::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valency {
    Uniform(usize),
    /// Two vertices with different out-degrees.
    NonUniform {
        u: usize,
        u_degree: usize,
        v: usize,
        v_degree: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<u32>>,
    offsets: Vec<usize>,
    labels: Vec<String>,
}

impl Digraph {
    /// Builds a digraph from an arc list; duplicate arcs are merged.
    pub fn from_arcs(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, DigraphError> {
        let mut out = vec![Vec::new(); n];
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(DigraphError::OutOfRange(u, v));
            }
            if u == v {
                return Err(DigraphError::LoopGenerated(u));
            }
            out[u].push(v as u32);
        }
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
        }
        let labels = match labels {
            Some(l) => {
                assert_eq!(l.len(), n, "one label per vertex");
                l
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self::from_sorted(out, labels))
    }

    fn from_sorted(out: Vec<Vec<u32>>, labels: Vec<String>) -> Self {
        let mut offsets = Vec::with_capacity(out.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for list in &out {
            acc += list.len();
            offsets.push(acc);
        }
        Digraph {
            out,
            offsets,
            labels,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn n_arcs(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn out_neighbors(&self, u: usize) -> &[u32] {
        &self.out[u]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&(v as u32)).is_ok()
    }

    /// Position of `(u, v)` in the sorted arc order.
    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        self.out[u]
            .binary_search(&(v as u32))
            .ok()
            .map(|i| self.offsets[u] + i)
    }

    /// Arcs sorted by `(u, v)`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v as usize)))
    }

    pub fn in_neighbors(&self) -> Vec<Vec<u32>> {
        let mut inn = vec![Vec::new(); self.n_vertices()];
        for (u, v) in self.arcs() {
            inn[v].push(u as u32);
        }
        inn
    }
}

/// Cayley digraph with arcs `(g, s g)`; vertex `i` is `elements[i]`.
pub fn cayley<T, F, L>(
    elements: &[T],
    connection: &[T],
    mul: F,
    label: L,
) -> Result<Digraph, DigraphError>
where
    T: Eq + Hash,
    F: Fn(&T, &T) -> T,
    L: Fn(&T) -> String,
{
    let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut out = Vec::with_capacity(elements.len());
    for (i, g) in elements.iter().enumerate() {
        let mut list = Vec::with_capacity(connection.len());
        for (ci, s) in connection.iter().enumerate() {
            let prod = mul(s, g);
            let j = *index.get(&prod).ok_or(DigraphError::NotClosed {
                connection: ci,
                vertex: i,
            })?;
            if j == i {
                return Err(DigraphError::LoopGenerated(i));
            }
            list.push(j as u32);
        }
        list.sort_unstable();
        list.dedup();
        out.push(list);
    }
    let labels = elements.iter().map(label).collect();
    Ok(Digraph::from_sorted(out, labels))
}

pub fn out_valency(d: &Digraph) -> Valency {
    let first = d.out_neighbors(0).len();
    match (1..d.n_vertices()).find(|&v| d.out_neighbors(v).len() != first) {
        None => Valency::Uniform(first),
        Some(v) => Valency::NonUniform {
            u: 0,
            u_degree: first,
            v,
            v_degree: d.out_neighbors(v).len(),
        },
    }
}

pub fn orientation_kind(d: &Digraph) -> OrientationKind {
    let mut symmetric = true;
    let mut asymmetric = true;
    for (u, v) in d.arcs() {
        if d.has_arc(v, u) {
            asymmetric = false;
        } else {
            symmetric = false;
        }
    }
    if symmetric {
        OrientationKind::Graph
    } else if asymmetric {
        OrientationKind::Oriented
    } else {
        OrientationKind::Mixed
    }
}

fn reaches_all(n: usize, adj: &[Vec<u32>]) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                queue.push_back(v as usize);
            }
        }
    }
    count == n
}

/// Every vertex reachable from vertex 0 along arcs and against them.
pub fn is_strongly_connected(d: &Digraph) -> bool {
    let n = d.n_vertices();
    if n <= 1 {
        return true;
    }
    reaches_all(n, &d.out) && reaches_all(n, &d.in_neighbors())
}

/// `d^a`: vertices are `a`-tuples in lexicographic order, arcs move exactly
/// one coordinate along an arc of `d`.
pub fn cartesian_power(d: &Digraph, a: u32, budget: u64) -> Result<Digraph, DigraphError> {
    assert!(a >= 1, "power must be positive");
    if a == 1 {
        return Ok(d.clone());
    }
    let n = d.n_vertices() as u64;
    let total = crate::heisenberg::checked_pow(n, a).unwrap_or(u64::MAX);
    if total > budget {
        return Err(DigraphError::BudgetExceeded {
            what: "Cartesian power",
            needed: total,
            budget,
        });
    }
    let n = n as usize;
    let a = a as usize;
    let total = total as usize;
    let weights: Vec<usize> = (0..a).map(|i| n.pow((a - 1 - i) as u32)).collect();
    let mut out = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for x in 0..total {
        let mut list = Vec::new();
        let mut parts = Vec::with_capacity(a);
        for &w in &weights {
            let digit = (x / w) % n;
            parts.push(d.labels[digit].as_str());
            for &y in d.out_neighbors(digit) {
                list.push((x - digit * w + y as usize * w) as u32);
            }
        }
        list.sort_unstable();
        out.push(list);
        labels.push(format!("[{}]", parts.join(";")));
    }
    Ok(Digraph::from_sorted(out, labels))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    EdgeList,
}

/// Header values of the edge-list format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListHeader {
    pub kind: String,
    pub k: u64,
    pub m: u64,
    pub vertices: usize,
    pub arcs: usize,
}

pub fn export(d: &Digraph, format: ExportFormat, k: u64, m: u64) -> String {
    match format {
        ExportFormat::Dot => to_dot(d),
        ExportFormat::EdgeList => to_edgelist(d, k, m),
    }
}

pub fn to_edgelist(d: &Digraph, k: u64, m: u64) -> String {
    let mut s = String::with_capacity(16 * d.n_arcs() + 80);
    writeln!(
        s,
        "#heiscay 1 kind={} k={} m={} vertices={} arcs={}",
        orientation_kind(d).as_str(),
        k,
        m,
        d.n_vertices(),
        d.n_arcs()
    )
    .unwrap();
    for (u, v) in d.arcs() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn to_dot(d: &Digraph) -> String {
    let kind = orientation_kind(d);
    let mut s = String::new();
    let (head, sep) = if kind == OrientationKind::Graph {
        ("graph", "--")
    } else {
        ("digraph", "->")
    };
    writeln!(s, "{head} heiscay {{").unwrap();
    for (i, label) in d.labels.iter().enumerate() {
        writeln!(s, "  {i} [label=\"{label}\"];").unwrap();
    }
    for (u, v) in d.arcs() {
        if kind == OrientationKind::Graph && u > v {
            continue;
        }
        writeln!(s, "  {u} {sep} {v};").unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn parse_edgelist(text: &str) -> Result<(EdgeListHeader, Digraph), DigraphError> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(DigraphError::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let err = |line: usize, msg: &str| DigraphError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut fields = first.split(' ');
    if fields.next() != Some("#heiscay") || fields.next() != Some("1") {
        return Err(err(1, "missing '#heiscay 1' header"));
    }
    let mut kv = HashMap::new();
    for f in fields {
        let (key, value) = f.split_once('=').ok_or_else(|| err(1, "malformed header field"))?;
        kv.insert(key, value);
    }
    let get = |key: &str| kv.get(key).copied().ok_or_else(|| err(1, "missing header field"));
    let num = |key: &str| -> Result<u64, DigraphError> {
        get(key)?.parse().map_err(|_| err(1, "non-numeric header field"))
    };
    let header = EdgeListHeader {
        kind: get("kind")?.to_string(),
        k: num("k")?,
        m: num("m")?,
        vertices: num("vertices")? as usize,
        arcs: num("arcs")? as usize,
    };
    let mut arcs = Vec::with_capacity(header.arcs);
    for (i, line) in lines {
        let (u, v) = line
            .split_once(' ')
            .ok_or_else(|| err(i + 1, "expected 'u v'"))?;
        let u: usize = u.parse().map_err(|_| err(i + 1, "bad vertex"))?;
        let v: usize = v.parse().map_err(|_| err(i + 1, "bad vertex"))?;
        arcs.push((u, v));
    }
    if arcs.len() != header.arcs {
        return Err(err(1, "arc count does not match header"));
    }
    let d = Digraph::from_arcs(header.vertices, arcs, None)?;
    Ok((header, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(
            n,
            (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)]),
            None,
        )
        .unwrap()
    }

    #[test]
    fn cayley_on_cyclic_group() {
        let elems: Vec<u32> = vec![0, 1];
        let d = cayley(&elems, &[1], |s, g| (s + g) % 2, |g| g.to_string()).unwrap();
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(orientation_kind(&d), OrientationKind::Graph);
        assert_eq!(out_valency(&d), Valency::Uniform(1));

        let err = cayley(&elems, &[0], |s, g| (s + g) % 2, |g| g.to_string()).unwrap_err();
        assert_eq!(err, DigraphError::LoopGenerated(0));
        let err = cayley(&elems, &[1], |s, g| s + g, |g| g.to_string()).unwrap_err();
        assert!(matches!(err, DigraphError::NotClosed { .. }));
    }

    #[test]
    fn predicates() {
        let c6 = cycle(6);
        assert_eq!(out_valency(&c6), Valency::Uniform(2));
        assert!(is_strongly_connected(&c6));

        let empty = Digraph::from_arcs(3, [], None).unwrap();
        assert_eq!(orientation_kind(&empty), OrientationKind::Graph);
        let one = Digraph::from_arcs(1, [], None).unwrap();
        assert!(is_strongly_connected(&one));

        let two_cycles = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2)], None).unwrap();
        assert!(!is_strongly_connected(&two_cycles));

        let mixed = Digraph::from_arcs(3, [(0, 1), (1, 0), (1, 2)], None).unwrap();
        assert_eq!(orientation_kind(&mixed), OrientationKind::Mixed);
        assert!(matches!(out_valency(&mixed), Valency::NonUniform { .. }));

        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)], None).unwrap();
        assert!(!is_strongly_connected(&path));
        assert_eq!(orientation_kind(&path), OrientationKind::Oriented);
    }

    #[test]
    fn loops_are_rejected() {
        assert_eq!(
            Digraph::from_arcs(2, [(1, 1)], None),
            Err(DigraphError::LoopGenerated(1))
        );
    }

    #[test]
    fn cycle_squared() {
        let c6 = cycle(6);
        let sq = cartesian_power(&c6, 2, 1_000).unwrap();
        assert_eq!(sq.n_vertices(), 36);
        assert_eq!(sq.n_arcs(), 144);
        assert_eq!(out_valency(&sq), Valency::Uniform(4));
        assert_eq!(orientation_kind(&sq), OrientationKind::Graph);
        assert_eq!(sq.labels()[7], "[1;1]");
        assert_eq!(cartesian_power(&c6, 1, 10).unwrap(), c6);
        assert!(cartesian_power(&c6, 4, 1_000).is_err());
    }

    #[test]
    fn exports() {
        let two = Digraph::from_arcs(2, [(0, 1), (1, 0)], None).unwrap();
        assert_eq!(
            to_edgelist(&two, 2, 1),
            "#heiscay 1 kind=graph k=2 m=1 vertices=2 arcs=2\n0 1\n1 0\n"
        );
        assert_eq!(
            to_dot(&two),
            "graph heiscay {\n  0 [label=\"0\"];\n  1 [label=\"1\"];\n  0 -- 1;\n}\n"
        );
        let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)], None).unwrap();
        let dot = to_dot(&tri);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches(" -> ").count(), 3);
    }

    #[test]
    fn edgelist_parse_errors() {
        assert!(parse_edgelist("").is_err());
        assert!(parse_edgelist("#other 1\n").is_err());
        assert!(parse_edgelist("#heiscay 1 kind=graph k=2 m=2 vertices=2 arcs=2\n0 1\n").is_err());
        assert!(parse_edgelist("#heiscay 1 kind=graph k=2 m=2 vertices=2 arcs=1\n0 x\n").is_err());
    }
}
