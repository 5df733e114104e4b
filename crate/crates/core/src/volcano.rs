//! Horizontal isogeny types and generalized cyclic volcanoes built from
//! crater group data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::ring::Ring;
use crate::Poly;

/// Splitting of a prime `𝔩` of `A` in `O_K`: pairs `(e_i, f_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub deg_l: u32,
    pub pairs: Vec<(u32, u32)>,
}

impl SplitData {
    pub fn new(deg_l: u32, pairs: Vec<(u32, u32)>) -> Result<Self> {
        if deg_l == 0 || pairs.is_empty() || pairs.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(Error::invalid("ramification and inertia degrees must be positive"));
        }
        Ok(SplitData { deg_l, pairs })
    }

    /// `Σ e_i f_i`.
    pub fn r(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }

    /// Number of primes with inertia degree 1.
    pub fn g1(&self) -> usize {
        self.pairs.iter().filter(|p| p.1 == 1).count()
    }

    pub fn inertia(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalType {
    pub m: Vec<u32>,
    pub cyclic: bool,
    /// Kernel `⊕ A/𝔩^{k_i}`, listed as the exponents `k_i = f_i m_i`.
    pub kernel: Vec<u32>,
}

/// All `(m_1, …, m_g)` with `Σ f_i m_i = m`, lexicographically descending.
pub fn horizontal_types(m: u32, split: &SplitData) -> Vec<HorizontalType> {
    fn go(f: &[u32], rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == f.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let fi = f[cur.len()];
        for mi in (0..=rest / fi).rev() {
            cur.push(mi);
            go(f, rest - mi * fi, cur, out);
            cur.pop();
        }
    }
    let f = split.inertia();
    let mut out = Vec::new();
    go(&f, m, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|v| HorizontalType {
            cyclic: v.iter().filter(|&&x| x > 0).count() == 1,
            kernel: v.iter().zip(&f).map(|(mi, fi)| mi * fi).collect(),
            m: v,
        })
        .collect()
}

/// `q^{deg_l·(r−1)}`.
pub fn branching_factor(q: u64, r: u32, deg_l: u32) -> Result<u64> {
    if q == 0 || r == 0 || deg_l == 0 {
        return Err(Error::invalid("q, r and deg l must be positive"));
    }
    q.checked_pow(deg_l * (r - 1))
        .ok_or_else(|| Error::TooLarge("branching factor overflows u64".into()))
}

/// A finite abelian group `⊕ Z/n_i` with the classes of the degree-1 primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CraterSpec {
    pub invariants: Vec<u64>,
    pub images: Vec<Vec<u64>>,
}

impl CraterSpec {
    pub fn new(invariants: Vec<u64>, images: Vec<Vec<u64>>) -> Result<Self> {
        if invariants.contains(&0) {
            return Err(Error::invalid("invariant factors must be positive"));
        }
        for x in &images {
            if x.len() != invariants.len() {
                return Err(Error::invalid("image has the wrong number of coordinates"));
            }
            if x.iter().zip(&invariants).any(|(a, n)| a >= n) {
                return Err(Error::invalid("image is not reduced"));
            }
        }
        Ok(CraterSpec { invariants, images })
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn g1(&self) -> usize {
        self.images.len()
    }

    /// Mixed-radix coordinates of the `i`-th element.
    pub fn element(&self, mut i: u64) -> Vec<u64> {
        self.invariants
            .iter()
            .map(|n| {
                let c = i % n;
                i /= n;
                c
            })
            .collect()
    }

    pub fn index(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.invariants).rev().fold(0, |acc, (c, n)| acc * n + c)
    }

    /// Order of an element.
    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.invariants)
            .map(|(&c, &n)| n / crate::field::gcd_u64(c, n))
            .fold(1, |a, b| a / crate::field::gcd_u64(a, b) * b)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.invariants)
            .map(|((x, y), n)| (x + y) % n)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal,
    Ascending,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub level: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolcanoGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

fn vid(t: usize, i: u64) -> String {
    format!("v{t}_{i}")
}

/// Cayley-type graph: `v → v + x_i` for every image `x_i`.
pub fn crater_graph(spec: &CraterSpec) -> VolcanoGraph {
    let mut g = VolcanoGraph::default();
    for i in 0..spec.order() {
        g.vertices.push(Vertex {
            id: vid(0, i),
            level: vec![0],
        });
        let v = spec.element(i);
        for x in &spec.images {
            let w = spec.index(&spec.add(&v, x));
            g.edges.push(Edge {
                src: vid(0, i),
                dst: vid(0, w),
                kind: EdgeKind::Horizontal,
            });
        }
    }
    g
}

pub fn build_volcano(crater: &CraterSpec, b: u64, depth: usize) -> Result<VolcanoGraph> {
    build_volcano_with(crater, &vec![b; depth], depth)
}

/// `branching[t−1]` children per vertex of `V_{t−1}` at level `t`.
pub fn build_volcano_with(crater: &CraterSpec, branching: &[u64], depth: usize) -> Result<VolcanoGraph> {
    if branching.len() < depth || branching[..depth].contains(&0) {
        return Err(Error::invalid("a positive branching factor is needed for every level"));
    }
    let mut g = crater_graph(crater);
    let mut prev = crater.order();
    for t in 1..=depth {
        let b = branching[t - 1];
        let n = prev
            .checked_mul(b)
            .filter(|&n| g.vertices.len() as u64 + n <= 10_000_000)
            .ok_or_else(|| Error::TooLarge(format!("level {t} has more than 10^7 vertices")))?;
        for i in 0..n {
            g.vertices.push(Vertex {
                id: vid(t, i),
                level: vec![t as u32],
            });
            g.edges.push(Edge {
                src: vid(t, i),
                dst: vid(t - 1, i / b),
                kind: EdgeKind::Ascending,
            });
        }
        prev = n;
    }
    Ok(g)
}

/// `(max(t_i − 1, 0))_i`.
pub fn ascend_target(level: &[u32]) -> Vec<u32> {
    level.iter().map(|t| t.saturating_sub(1)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VolcanoParams {
    pub r: usize,
    pub g1: usize,
    pub b: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_volcano(g: &VolcanoGraph, p: VolcanoParams) -> Result<ValidationReport> {
    let mut level: BTreeMap<&str, &[u32]> = BTreeMap::new();
    for v in &g.vertices {
        if v.level.is_empty() {
            return Err(Error::invalid(format!("vertex {} has no level tag", v.id)));
        }
        if level.insert(&v.id, &v.level).is_some() {
            return Err(Error::invalid(format!("duplicate vertex {}", v.id)));
        }
    }
    let t = |id: &str| level[id].iter().copied().max().unwrap_or(0);
    let mut out: BTreeMap<&str, Vec<&Edge>> = BTreeMap::new();
    let mut indeg: BTreeMap<&str, u64> = level.keys().map(|&k| (k, 0)).collect();
    for e in &g.edges {
        if !level.contains_key(e.src.as_str()) || !level.contains_key(e.dst.as_str()) {
            return Err(Error::invalid(format!(
                "edge {} -> {} has an unknown endpoint",
                e.src, e.dst
            )));
        }
        out.entry(&e.src).or_default().push(e);
        *indeg.get_mut(e.dst.as_str()).expect("checked") += 1;
    }
    let depth = level.keys().map(|k| t(k)).max().unwrap_or(0);
    let mut rep = ValidationReport::default();
    if p.g1 > p.r {
        rep.violations.push(format!("g1 = {} exceeds r = {}", p.g1, p.r));
    }
    let mut loops = 0;
    for (&id, lv) in &level {
        let tv = t(id);
        let edges = out.get(id).map_or(&[][..], |v| v.as_slice());
        let din = indeg[id];
        for e in edges {
            let td = t(&e.dst);
            match e.kind {
                EdgeKind::Horizontal if tv != 0 || td != 0 => rep
                    .violations
                    .push(format!("horizontal edge {} -> {} outside the crater", e.src, e.dst)),
                EdgeKind::Ascending if tv == 0 || td + 1 != tv => rep
                    .violations
                    .push(format!("edge {} -> {} is not ascending by one level", e.src, e.dst)),
                _ => {}
            }
            if e.src == e.dst {
                loops += 1;
            }
            if lv.len() > 1 && e.kind == EdgeKind::Ascending && level[e.dst.as_str()] != ascend_target(lv).as_slice() {
                rep.violations
                    .push(format!("edge {} -> {} misses the ascend target", e.src, e.dst));
            }
        }
        if tv == 0 {
            if edges.len() != p.g1 || edges.len() > p.r {
                rep.violations.push(format!(
                    "crater vertex {id} has out-degree {}, expected {}",
                    edges.len(),
                    p.g1
                ));
            }
            let want = p.g1 as u64 + if depth >= 1 { p.b } else { 0 };
            if din != want {
                rep.violations
                    .push(format!("crater vertex {id} has in-degree {din}, expected {want}"));
            }
        } else {
            match edges.len() {
                0 => rep.violations.push(format!("out-degree 0 below crater at {id}")),
                1 => {}
                k => rep
                    .violations
                    .push(format!("vertex {id} has out-degree {k} below crater")),
            }
            let ok = if tv < depth { din == p.b } else { din == 0 };
            if !ok {
                rep.violations
                    .push(format!("vertex {id} at level {tv} has in-degree {din}"));
            }
        }
    }
    if loops > 0 {
        rep.notes.push(format!(
            "{loops} self-loop(s) counted once as in-edge and once as out-edge"
        ));
    }
    Ok(rep)
}

impl VolcanoGraph {
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::new();
        for v in &self.vertices {
            let t = *v.level.iter().max().unwrap_or(&0) as usize;
            if sizes.len() <= t {
                sizes.resize(t + 1, 0);
            }
            sizes[t] += 1;
        }
        sizes
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One cluster per level; edges carry a `kind` attribute.
    pub fn to_dot(&self) -> String {
        let mut levels: BTreeMap<u32, Vec<&str>> = BTreeMap::new();
        for v in &self.vertices {
            levels
                .entry(*v.level.iter().max().unwrap_or(&0))
                .or_default()
                .push(&v.id);
        }
        let mut s = String::from("digraph volcano {\n");
        for (t, ids) in &levels {
            let _ = writeln!(s, "  subgraph cluster_level_{t} {{\n    label=\"level {t}\";");
            for id in ids {
                let _ = writeln!(s, "    \"{id}\";");
            }
            s.push_str("  }\n");
        }
        for e in &self.edges {
            let kind = match e.kind {
                EdgeKind::Horizontal => "horizontal",
                EdgeKind::Ascending => "ascending",
            };
            let _ = writeln!(s, "  \"{}\" -> \"{}\" [kind={kind}];", e.src, e.dst);
        }
        s.push_str("}\n");
        s
    }

    /// Undirected view: unordered vertex pairs with multiplicity.
    pub fn undirected(&self) -> BTreeMap<(String, String), usize> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            let k = if e.src <= e.dst {
                (e.src.clone(), e.dst.clone())
            } else {
                (e.dst.clone(), e.src.clone())
            };
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    pub fn vertex_ids(&self) -> BTreeSet<&str> {
        self.vertices.iter().map(|v| v.id.as_str()).collect()
    }
}

/// Built-in crater data for rank 3 over `F_5` with `𝔩 = (T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `Pic(O_K) ≅ Z/6`, generated by the class of the split prime.
    R3Cycle,
    /// `Pic(O_K)` trivial (genus 0).
    R3Loop,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "r3-cycle" => Ok(Preset::R3Cycle),
            "r3-loop" => Ok(Preset::R3Loop),
            _ => Err(Error::invalid(format!("unknown preset {s}"))),
        }
    }

    pub fn crater(self) -> CraterSpec {
        match self {
            Preset::R3Cycle => CraterSpec {
                invariants: vec![6],
                images: vec![vec![1]],
            },
            Preset::R3Loop => CraterSpec {
                invariants: vec![],
                images: vec![vec![]],
            },
        }
    }

    pub fn params(self) -> VolcanoParams {
        VolcanoParams {
            r: 3,
            g1: 1,
            b: branching_factor(5, 3, 1).expect("small"),
        }
    }

    pub fn build(self, depth: usize) -> Result<VolcanoGraph> {
        build_volcano(&self.crater(), self.params().b, depth)
    }
}

/// `#{(x, y) ∈ F_q² : y^{r_exp} = f(x)}` by enumeration.
pub fn count_affine_points(f: &Poly, r_exp: u64) -> Result<u64> {
    let ctx = f.coeff_zero().ctx().clone();
    if ctx.q() > 1 << 16 {
        return Err(Error::TooLarge(format!("q = {} exceeds 2^16", ctx.q())));
    }
    let mut roots = vec![0u64; ctx.q() as usize];
    for y in Fq::elements(&ctx) {
        roots[y.pow(r_exp).index() as usize] += 1;
    }
    Ok(Fq::elements(&ctx).map(|x| roots[f.eval(&x).index() as usize]).sum())
}
